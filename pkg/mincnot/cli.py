"""Command-line front end.

    python -m mincnot synth    matrix.json [--keep-swap] [--no-simplify]
    python -m mincnot kak      matrix.json
    python -m mincnot ep       matrix.json [--mc] [--mc-samples N]
    python -m mincnot verify   matrix.json circuit.txt
    python -m mincnot simulate circuit.txt

Exit codes: 0 ok, 1 input is not unitary, 2 verification or synthesis
failure, 3 unreadable or malformed input.
"""

import argparse
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from .circuit_ir import circuit_residual, circuit_to_unitary, emit_circuit_text, format_float, parse_circuit_text
from .config import DEFAULT_MC_SAMPLES, DEFAULT_SEED, CliConfig, MatrixFile
from .core_linalg import require_unitary, wrap_angle
from .ep import ep_exact, ep_monte_carlo
from .errors import NotUnitary, ParseError, SynthesisError, VerificationFailure
from .kak import kak_decompose, zyz_decompose
from .synth import synth_u4

logger = logging.getLogger(__name__)

# ----------------- Config -----------------
EXIT_OK = 0
EXIT_NOT_UNITARY = 1
EXIT_FAILURE = 2
EXIT_BAD_INPUT = 3


# ----------------- Helpers -----------------
def load_matrix(path, config: CliConfig):
    matrix = MatrixFile.model_validate_json(Path(path).read_text(encoding="utf-8")).to_array()
    return require_unitary(matrix, 4, config.tol)


def load_circuit(path):
    return parse_circuit_text(Path(path).read_text(encoding="utf-8"))


# ----------------- Commands -----------------
def cmd_synth(path, config: CliConfig) -> str:
    u = load_matrix(path, config)
    report = synth_u4(u, expand_swap=config.expand_swap, simplify_output=config.simplify, seed=config.seed)
    if report.residual >= config.tol:
        raise VerificationFailure(report.residual, config.tol, "synthesized circuit")
    counts = report.counts
    lines = [
        "# report:",
        f"# cnot_class {report.cnot_class}",
        f"# path {report.path.value}",
        f"# cnot {counts.cnot}",
        f"# one_qubit {counts.one_qubit}",
        f"# swap {counts.swap}",
        f"# residual {format_float(report.residual)}",
    ]
    return emit_circuit_text(report.circuit) + "\n".join(lines) + "\n"


def cmd_kak(path, config: CliConfig) -> str:
    u = load_matrix(path, config)
    dec = kak_decompose(u, config.seed)
    local_lines = []
    phase = dec.phase
    for name, a in (("a1", dec.a1), ("a2", dec.a2), ("a3", dec.a3), ("a4", dec.a4)):
        angles = zyz_decompose(a)
        phase += angles.phase
        local_lines.append(
            f"{name} {format_float(angles.alpha)} {format_float(angles.theta)} {format_float(angles.beta)}"
        )
    lines = [
        f"alpha {format_float(dec.alpha)}",
        f"beta {format_float(dec.beta)}",
        f"gamma {format_float(dec.gamma)}",
        f"phase {format_float(wrap_angle(phase))}",
        "# locals as Rz(alpha) Ry(theta) Rz(beta)",
        *local_lines,
    ]
    return "\n".join(lines) + "\n"


def cmd_ep(path, config: CliConfig, monte_carlo: bool = False) -> str:
    u = load_matrix(path, config)
    lines = [f"ep {format_float(ep_exact(u))}"]
    if monte_carlo:
        mean, std_error = ep_monte_carlo(u, config.mc_samples, config.seed)
        lines.append(f"mc_mean {format_float(mean)}")
        lines.append(f"mc_std_error {format_float(std_error)}")
        lines.append(f"mc_samples {config.mc_samples}")
    return "\n".join(lines) + "\n"


def cmd_verify(matrix_path, circuit_path, config: CliConfig) -> tuple[str, bool]:
    u = load_matrix(matrix_path, config)
    residual = circuit_residual(u, load_circuit(circuit_path))
    passed = residual < config.tol
    return f"residual {format_float(residual)}\n{'pass' if passed else 'fail'}\n", passed


def cmd_simulate(circuit_path) -> str:
    u = circuit_to_unitary(load_circuit(circuit_path))
    return MatrixFile.from_array(u).model_dump_json() + "\n"


# ----------------- Parser -----------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=CliConfig.model_fields["tol"].default,
                        help="verification tolerance")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized steps")
    common.add_argument("--keep-swap", action="store_true", help="emit SWAP instead of fusing it into CNOTs")
    common.add_argument("--no-simplify", action="store_true", help="skip the peephole pass")
    common.add_argument("--mc", action="store_true", help="also estimate EP by Monte Carlo")
    common.add_argument("--mc-samples", type=int, default=DEFAULT_MC_SAMPLES)
    common.add_argument("--verbose", "-v", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(prog="mincnot", description="Minimal-CNOT two-qubit gate compiler.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("synth", "synthesize a circuit for a matrix file"),
        ("kak", "print the canonical decomposition"),
        ("ep", "print the entangling power"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("matrix")
    p = sub.add_parser("verify", parents=[common], help="check a circuit against a matrix")
    p.add_argument("matrix")
    p.add_argument("circuit")
    p = sub.add_parser("simulate", parents=[common], help="print the unitary of a circuit file")
    p.add_argument("circuit")
    return parser


def _config_from(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        tol=args.tol,
        seed=args.seed,
        expand_swap=not args.keep_swap,
        simplify=not args.no_simplify,
        mc_samples=args.mc_samples,
        verbose=args.verbose,
    )


def _run(args: argparse.Namespace, config: CliConfig) -> int:
    if args.command == "synth":
        sys.stdout.write(cmd_synth(args.matrix, config))
    elif args.command == "kak":
        sys.stdout.write(cmd_kak(args.matrix, config))
    elif args.command == "ep":
        sys.stdout.write(cmd_ep(args.matrix, config, args.mc))
    elif args.command == "verify":
        text, passed = cmd_verify(args.matrix, args.circuit, config)
        sys.stdout.write(text)
        return EXIT_OK if passed else EXIT_FAILURE
    else:
        sys.stdout.write(cmd_simulate(args.circuit))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from(args)
    except ValidationError as e:
        print(f"error: invalid option: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if config.verbose:
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr,
                            format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        return _run(args, config)
    except (OSError, ParseError, ValidationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except NotUnitary as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NOT_UNITARY
    except SynthesisError as e:
        logger.debug("synthesis failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
