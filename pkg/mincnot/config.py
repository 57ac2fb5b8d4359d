import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

# ----------------- Config -----------------
UNITARY_TOL = 1e-10          # max-norm of U†U - I
RECONSTRUCTION_TOL = 1e-9    # symmetric diagonalization round trip
ORTHOGONAL_TOL = 1e-9        # real / orthogonal / det checks on O(4) inputs
PRODUCT_TOL = 1e-8           # NotAProduct threshold
CLASS_TOL = 1e-8             # Weyl-cell comparisons in cnot_class
VERIFY_TOL = 1e-8            # final simulation check of every emitted circuit
ZERO_ANGLE_TOL = 1e-12       # rotations dropped by simplify
PHASE_SUM_TOL = 1e-9         # sum of D phases must vanish mod 2pi

MAX_DIAG_REDRAWS = 16
MAX_KAK_SEEDS = 8
MAX_SIMPLIFY_PASSES = 100
MC_CHUNK_SIZE = 8192
MC_MIN_SAMPLES = 100

DEFAULT_SEED = 0
DEFAULT_MC_SAMPLES = 100_000


# ----------------- Schemas -----------------
class CliConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    tol: float = Field(default=1e-9, gt=0)
    seed: int = DEFAULT_SEED
    expand_swap: bool = True
    simplify: bool = True
    mc_samples: int = Field(default=DEFAULT_MC_SAMPLES, ge=MC_MIN_SAMPLES)
    verbose: bool = False


class MatrixFile(BaseModel):
    """JSON form of a 4x4 complex matrix: separate real and imaginary parts."""

    model_config = ConfigDict(extra="forbid")

    dim: Literal[4] = 4
    re: list[list[float]]
    im: list[list[float]]

    @field_validator("re", "im")
    @classmethod
    def _four_by_four(cls, rows: list[list[float]]) -> list[list[float]]:
        if len(rows) != 4 or any(len(row) != 4 for row in rows):
            raise ValueError("expected a 4x4 array")
        if not all(math.isfinite(x) for row in rows for x in row):
            raise ValueError("entries must be finite")
        return rows

    def to_array(self) -> np.ndarray:
        return np.array(self.re, dtype=float) + 1j * np.array(self.im, dtype=float)

    @classmethod
    def from_array(cls, u: np.ndarray) -> "MatrixFile":
        u = np.asarray(u, dtype=complex)
        return cls(re=u.real.tolist(), im=u.imag.tolist())
