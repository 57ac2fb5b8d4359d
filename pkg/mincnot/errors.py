"""Exception hierarchy shared by the compiler, the CLI and the HTTP service."""


class SynthesisError(Exception):
    """Base class for every mathematical rejection or internal failure."""


class NotUnitary(SynthesisError):
    pass


class NotSymmetric(SynthesisError):
    pass


class ConvergenceFailure(SynthesisError):
    pass


class InconsistentPhases(SynthesisError):
    pass


class NotSpecialOrthogonal(SynthesisError):
    pass


class NotNegOrthogonal(SynthesisError):
    pass


class NotLocallyEquivalent(SynthesisError):
    pass


class NotNormalized(SynthesisError):
    pass


class NotAProduct(SynthesisError):
    """Raised when a 4x4 matrix is not a tensor product of two 2x2 unitaries."""

    def __init__(self, residual: float, tol: float):
        super().__init__(f"not a tensor product: residual {residual:.3e} > tol {tol:.1e}")
        self.residual = residual
        self.tol = tol


class VerificationFailure(SynthesisError):
    """Simulated circuit does not reproduce its target. Signals an internal bug."""

    def __init__(self, residual: float, tol: float, what: str = "circuit"):
        super().__init__(f"{what} failed verification: residual {residual:.3e} > tol {tol:.1e}")
        self.residual = residual
        self.tol = tol


class ParseError(SynthesisError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason
