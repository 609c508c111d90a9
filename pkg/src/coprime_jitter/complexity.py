"""Multiplication and addition counts of blind and non-blind autocorrelation estimation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_scheme
from .core_model import CoprimeConfig
from .weights import WeightTable, additional_contributors, weight_mapped_blind, weight_mapped_nonblind


@dataclass(frozen=True, eq=False)
class ComplexityReport:
    """Per-lag multipliers ``m(l) = z(l)`` and adders ``a(l) = z(l) - 1`` over ``0 .. r*M*N - 1``.

    Lags without contributors cost nothing: ``m(l) = a(l) = 0``.
    """

    scheme: str
    config: CoprimeConfig
    lags: np.ndarray
    multiplications: np.ndarray
    additions: np.ndarray

    @property
    def C_M(self) -> int:
        return int(self.multiplications.sum())

    @property
    def C_A(self) -> int:
        return int(self.additions.sum())

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "C_M": self.C_M,
            "C_A": self.C_A,
            "per_lag": [{"l": int(l), "m": int(m), "a": int(a)}
                        for l, m, a in zip(self.lags, self.multiplications, self.additions)],
        }


def report_from_table(table: WeightTable, scheme: str) -> ComplexityReport:
    lags, z = table.nonnegative()
    adds = np.where(z > 0, z - 1, 0)
    return ComplexityReport(scheme, table.config, lags, z.copy(), adds)


def complexity_report(config: CoprimeConfig, scheme: str = "nonblind") -> ComplexityReport:
    check_scheme(scheme)
    table = weight_mapped_nonblind(config) if scheme == "nonblind" else weight_mapped_blind(config)
    return report_from_table(table, scheme)


def complexity_comparison(config: CoprimeConfig) -> dict:
    """Both reports, their total deltas and the closed-form extra contributor count."""
    blind = complexity_report(config, "blind")
    nonblind = complexity_report(config, "nonblind")
    extra = additional_contributors(config)
    delta = {"C_M": nonblind.C_M - blind.C_M, "C_A": nonblind.C_A - blind.C_A}
    return {
        "config": {"M": config.M, "N": config.N, "r": config.r},
        "blind": blind.to_dict(),
        "nonblind": nonblind.to_dict(),
        "delta": delta,
        "additional_contributors": extra,
        "delta_identity_holds": delta["C_M"] == extra and delta["C_A"] == extra,
    }
