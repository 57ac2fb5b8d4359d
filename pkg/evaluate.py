#!/usr/bin/env python3
"""
evaluate.py

Roda as varreduras de aceitação do compilador e grava o relatório.
- Haar aleatórias: <= 3 CNOTs, <= 15 portas de um qubit
- SO(4): exatamente 2 CNOTs, <= 12 portas de um qubit
- O(4) com det -1: exatamente 3 CNOTs (SWAP expandido), <= 12 portas de um qubit
- Portas nomeadas (I, CNOT, CZ, SWAP), template N, EP e a prova do SWAP

Usage:
    python3 evaluate.py          # 1000 Haar, 500 SO(4), 200 O(4)
    python3 evaluate.py 100      # escala todas as varreduras por 100/1000

Saída:
    metrics_report.json
    metrics_report.csv
"""

import csv
import json
import math
import sys
import time
from collections import defaultdict
from datetime import datetime, timezone

import numpy as np

from mincnot.circuit_ir import CNOT1, CZ, SWAP, circuit_to_unitary
from mincnot.config import VERIFY_TOL
from mincnot.core_linalg import I4, haar_random_unitary, random_o4_negdet, random_so4
from mincnot.ep import ep_exact, ep_monte_carlo, swap_lower_bound_witness
from mincnot.kak import n_matrix
from mincnot.synth import synth_n, synth_u4, template_fit_residual

# Limites por cenário: (máx CNOT, mín CNOT, máx um-qubit)
LIMITS = {
    "haar": (3, 0, 15),
    "so4": (2, 2, 12),
    "o4_neg": (3, 3, 12),
}
DEFAULT_HAAR = 1000
SWAP_FIT_RESTARTS = 200
MC_SAMPLES = 100_000

def sweep(scenario, matrices, rows):
    max_cnot, min_cnot, max_one = LIMITS[scenario]
    for i, u in enumerate(matrices):
        t0 = time.perf_counter()
        try:
            report = synth_u4(u)
            c = report.counts
            ok = (min_cnot <= c.cnot <= max_cnot and c.one_qubit <= max_one
                  and c.swap == 0 and report.residual < VERIFY_TOL)
            rows.append({
                "cenario": scenario, "index": i, "path": report.path.value,
                "cnot": c.cnot, "one_qubit": c.one_qubit, "residual": report.residual,
                "ok": ok, "secs": round(time.perf_counter() - t0, 6), "error": None,
            })
        except Exception as e:
            rows.append({
                "cenario": scenario, "index": i, "path": None, "cnot": None, "one_qubit": None,
                "residual": None, "ok": False, "secs": round(time.perf_counter() - t0, 6),
                "error": str(e),
            })

def named_gates(rows):
    expected = {"identity": (I4, 0), "cnot": (CNOT1, 1), "cz": (CZ, 1), "swap": (SWAP, 3)}
    for name, (u, cnots) in expected.items():
        report = synth_u4(u)
        rows.append({
            "cenario": f"named:{name}", "index": 0, "path": report.path.value,
            "cnot": report.counts.cnot, "one_qubit": report.counts.one_qubit,
            "residual": report.residual,
            "ok": report.counts.cnot == cnots and report.residual < VERIFY_TOL,
            "secs": None, "error": None,
        })

def n_template_check(n, rng):
    worst = 0.0
    for _ in range(n):
        alpha, beta, gamma = rng.uniform(-math.pi, math.pi, size=3)
        worst = max(worst, float(np.max(np.abs(
            circuit_to_unitary(synth_n(alpha, beta, gamma)) - n_matrix(alpha, beta, gamma)))))
    return worst

def ep_checks(n_mc):
    mc = []
    for s in range(n_mc):
        u = haar_random_unitary(1000 + s)
        exact = ep_exact(u)
        mean, err = ep_monte_carlo(u, MC_SAMPLES, seed=s)
        mc.append({"exact": exact, "mc_mean": mean, "std_error": err,
                   "within_3_sigma": abs(mean - exact) <= 3 * err})
    return {
        "ep_cnot": ep_exact(CNOT1),
        "ep_swap": ep_exact(SWAP),
        "monte_carlo": mc,
    }

def evaluate(n_haar=DEFAULT_HAAR):
    scale = n_haar / DEFAULT_HAAR
    n_so4 = max(1, round(500 * scale))
    n_o4 = max(1, round(200 * scale))
    rng = np.random.default_rng(0)
    rows = []

    print(f"[info] Haar: {n_haar}, SO(4): {n_so4}, O(4) det -1: {n_o4}")
    sweep("haar", (haar_random_unitary(s) for s in range(n_haar)), rows)
    sweep("so4", (random_so4(s) for s in range(n_so4)), rows)
    sweep("o4_neg", (random_o4_negdet(s) for s in range(n_o4)), rows)
    named_gates(rows)

    per_scenario = defaultdict(lambda: {"count": 0, "ok": 0, "max_residual": 0.0, "max_cnot": 0, "max_one_qubit": 0})
    for r in rows:
        s = per_scenario[r["cenario"]]
        s["count"] += 1
        s["ok"] += int(r["ok"])
        if r["residual"] is not None:
            s["max_residual"] = max(s["max_residual"], r["residual"])
            s["max_cnot"] = max(s["max_cnot"], r["cnot"])
            s["max_one_qubit"] = max(s["max_one_qubit"], r["one_qubit"])

    witness = swap_lower_bound_witness()
    swap_fit = template_fit_residual(SWAP, 2, restarts=SWAP_FIT_RESTARTS, seed=0)
    ep = ep_checks(n_mc=max(1, round(10 * scale)))

    report = {
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "total_records": len(rows),
        "failures": sum(1 for r in rows if not r["ok"]),
        "per_scenario": dict(per_scenario),
        "n_template_max_error": n_template_check(max(1, round(500 * scale)), rng),
        "ep": ep,
        "swap_witness_passed": witness.passed,
        "swap_two_cnot_best_fit": swap_fit,
        "swap_two_cnot_fit_ok": swap_fit >= 0.05,
    }
    return report, rows

def save_report(report, rows, out_json="metrics_report.json", out_csv="metrics_report.csv"):
    with open(out_json, "w", encoding="utf-8") as f:
        json.dump(report, f, indent=2, ensure_ascii=False)
    # grava CSV detalhado
    fieldnames = ["cenario", "index", "path", "cnot", "one_qubit", "residual", "ok", "secs", "error"]
    with open(out_csv, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames)
        writer.writeheader()
        for r in rows:
            writer.writerow({k: r.get(k) for k in fieldnames})

def checks_passed(report):
    return (report["failures"] == 0
            and report["swap_witness_passed"]
            and report["swap_two_cnot_fit_ok"]
            and all(m["within_3_sigma"] for m in report["ep"]["monte_carlo"]))


def main():
    n_haar = int(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_HAAR
    report, rows = evaluate(n_haar)
    save_report(report, rows)
    # imprime resumo
    print("\n==== Relatório resumo ====")
    print(f"Circuitos sintetizados: {report['total_records']}")
    print(f"Falhas: {report['failures']}")
    for scen, s in report["per_scenario"].items():
        print(f"  {scen:14s} {s['ok']}/{s['count']} ok, max CNOT {s['max_cnot']}, "
              f"max 1q {s['max_one_qubit']}, max residual {s['max_residual']:.2e}")
    print(f"Template N, erro máximo: {report['n_template_max_error']:.2e}")
    print(f"EP(CNOT) = {report['ep']['ep_cnot']}, EP(SWAP) = {report['ep']['ep_swap']}")
    print(f"Prova do SWAP: {'ok' if report['swap_witness_passed'] else 'FALHOU'}")
    print(f"Melhor ajuste de SWAP com 2 CNOTs: {report['swap_two_cnot_best_fit']:.3f}")
    print("Relatório completo salvo em metrics_report.json e metrics_report.csv")
    if not checks_passed(report):
        print("[erro] verificações falharam")
        return 1
    return 0

if __name__ == "__main__":
    sys.exit(main())
