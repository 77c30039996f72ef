"""Unit conventions and published H2+ reference values.

Atomic units throughout: hbar = m_e = e = 1. The delta-well and oscillator
models are dimensionless with m = a = 1 unless stated.
"""
from __future__ import annotations

from types import MappingProxyType
from typing import NamedTuple

from .errors import UnknownMethod

HBAR = 1.0
M_E = 1.0
E_CHARGE = 1.0


class ReferenceRow(NamedTuple):
    method: str
    R_e: str  # kept as printed
    E_e: str

    @property
    def values(self) -> tuple[float, float]:
        return float(self.R_e), float(self.E_e)


# equilibrium bond distance and total energy (a.u.)
TABLE1: tuple[ReferenceRow, ...] = (
    ReferenceRow("LCAO-MO", "2.5", "-0.5648"),
    ReferenceRow("Bates et al.", "2.0", "-0.6026"),
    ReferenceRow("Pauling", "2.5", "-0.5648"),
    ReferenceRow("Bowen et al.", "2.0", "-0.5985"),
    ReferenceRow("Finkelstein et al.", "2.0", "-0.5865"),
    ReferenceRow("Madsen et al.", "2.0", "-0.6026"),
    ReferenceRow("Gaussian09", "2.0", "-0.6012"),
    ReferenceRow("KEP", "2.0", "-0.6019"),
    ReferenceRow("Experiment", "2.0", "-0.6026"),
)

_BY_NAME = MappingProxyType({r.method: r for r in TABLE1})

# exact total energy at R = 2; the floor for every variational H2+ result
EXACT_H2PLUS_R2_TOTAL = float(_BY_NAME["Bates et al."].E_e)


def reference_row(method: str) -> tuple[float, float]:
    try:
        return _BY_NAME[method].values
    except KeyError:
        raise UnknownMethod(f"no published row for {method!r}; known: {', '.join(_BY_NAME)}") from None


def table1_csv() -> str:
    lines = ["method,R_e,E_e"] + [f"{r.method},{r.R_e},{r.E_e}" for r in TABLE1]
    return "\n".join(lines) + "\n"
