"""Threshold table for the power-reward problem, parameterised by (alpha, rho, -lam/a, gamma).

The threshold equation depends on a and lam only through lam/(-a), so each
row is solved with a = -1 and lam = -lam/a.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .model import LevyModel
from .stopping.power import solve_power_problem

TABLE_COLUMNS = ("alpha", "rho", "lambda_over_minus_a", "gamma", "gamma_over_rho", "x_star", "x_circ")


@dataclass(frozen=True)
class TableRow:
    alpha: float
    rho: float
    lambda_over_minus_a: float
    gamma: float

    def model(self) -> LevyModel:
        return LevyModel(a=-1.0, lam=self.lambda_over_minus_a, alpha=self.alpha)


# (alpha, rho, -lam/a, gamma, printed x*, printed x_circ or None), 4 printed decimals
REFERENCE_TABLE = (
    (10.0, 1.0, 9.0, 20.0, 19.8896, 18.8896),
    (10.0, 1.0, 9.0, 10.0, 9.8902, 8.8904),
    (10.0, 1.0, 9.0, 5.0, 4.8915, 3.8921),
    (10.0, 1.0, 9.0, 2.5, 2.3939, 1.3968),
    (10.0, 1.0, 9.0, 1.0, 0.9, None),
    (10.0, 9.0, 1.0, 20.0, 1.7613, 1.6579),
    (10.0, 9.0, 1.0, 10.0, 0.7511, 0.6547),
    (10.0, 9.0, 1.0, 5.0, 0.2881, 0.2045),
    (10.0, 9.0, 1.0, 2.5, 0.0917, 0.0319),
    (10.0, 9.0, 1.0, 1.0, 0.0111, None),
    (1.0, 0.5, 0.5, 20.0, 38.1592, 36.166),
    (1.0, 0.5, 0.5, 10.0, 18.2726, 16.2942),
    (1.0, 0.5, 0.5, 5.0, 8.4369, 6.5011),
    (1.0, 0.5, 0.5, 2.5, 3.6529, 1.8398),
    (1.0, 0.5, 0.5, 1.0, 1.0, None),
)


def reference_rows() -> list[TableRow]:
    return [TableRow(*row[:4]) for row in REFERENCE_TABLE]


def load_rows(path: str | Path) -> list[TableRow]:
    """Rows from a JSON list of objects with keys alpha, rho, lambda_over_minus_a, gamma."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, list):
        raise ValueError("table spec must be a JSON list of rows")
    rows = []
    for item in data:
        row = TableRow(
            float(item["alpha"]), float(item["rho"]), float(item["lambda_over_minus_a"]), float(item["gamma"])
        )
        if abs(row.alpha - row.lambda_over_minus_a - row.rho) > 1e-9 * max(1.0, row.alpha):
            raise ValueError(f"inconsistent row {item}: rho must equal alpha - lambda_over_minus_a")
        rows.append(row)
    return rows


def solve_row(row: TableRow) -> dict:
    sol = solve_power_problem(row.model(), row.gamma)
    return {
        "alpha": row.alpha,
        "rho": row.rho,
        "lambda_over_minus_a": row.lambda_over_minus_a,
        "gamma": row.gamma,
        "gamma_over_rho": sol.gamma_over_rho,
        "x_star": sol.x_star,
        "x_circ": sol.x_circ,
    }


def solve_table(rows: list[TableRow]) -> list[dict]:
    return [solve_row(row) for row in rows]
