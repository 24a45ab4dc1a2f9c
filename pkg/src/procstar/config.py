"""Tolerances and size caps used throughout the library.

All numerical checks in the package are parametrized by the four
tolerances below.  The defaults leave double-precision headroom at the
matrix sizes the caps permit; override them per call or via a RunConfig
when driving the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Tolerances:
    alg: float = 1e-10    # algebraic identities (unitarity, homomorphism, ...)
    spec: float = 1e-7    # eigenvalue cluster separation
    norm: float = 1e-6    # norm comparisons
    group: float = 1e-8   # matrix identification during group closures

    def __post_init__(self) -> None:
        for name in ("alg", "spec", "norm", "group"):
            if getattr(self, name) <= 0:
                raise ValueError(f"tolerance {name!r} must be positive")


@dataclass(frozen=True)
class Caps:
    group_order: int = 5000      # dense regular-representation work
    closure_size: int = 10**6    # matrix-group closure enumeration
    word_length: int = 12        # free-group word sweeps
    dense_svd: int = 1000        # largest order handled by dense SVD
    power_tol: float = 1e-8      # relative tolerance of the power iteration
    power_maxiter: int = 10**4
    decompose_retries: int = 8

    def __post_init__(self) -> None:
        for name in ("group_order", "closure_size", "word_length",
                     "dense_svd", "power_maxiter", "decompose_retries"):
            if getattr(self, name) <= 0:
                raise ValueError(f"cap {name!r} must be positive")
        if self.power_tol <= 0:
            raise ValueError("cap 'power_tol' must be positive")


DEFAULT_TOLERANCES = Tolerances()
DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class RunConfig:
    """Bundle of knobs a CLI invocation runs under."""

    tolerances: Tolerances = field(default_factory=Tolerances)
    caps: Caps = field(default_factory=Caps)
    seed: int = 0
    output: str | None = None      # path; None means stdout
    format: str = "json"           # "json" | "text"

    def __post_init__(self) -> None:
        if self.format not in ("json", "text"):
            raise ValueError(f"unknown output format {self.format!r}")
