"""Plain-data views of solver results for the JSON, CSV and text writers."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict
from typing import List, Optional, Sequence

from .hamiltonian import ModelParams
from .recurrence import EigenPair
from .sweep import BoundaryPoint, SweepResult
from .symmetry import PropositionReport, SymmetryReport

SWEEP_COLUMNS = (
    "gamma",
    "alpha",
    "n_real",
    "n_broken",
    "min_imag_margin",
    "marginal",
    "mismatches",
    "error",
)


def complex_obj(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def params_obj(params: ModelParams) -> dict:
    return {"epsilon0": params.epsilon0, "gamma": params.gamma, "alpha": params.alpha}


def eigenpair_obj(pair: EigenPair, report: SymmetryReport, partner: Optional[int]) -> dict:
    return {
        "lambda": complex_obj(pair.eigenvalue),
        "is_real": pair.is_real,
        "residual": pair.residual,
        "multiplicity": pair.multiplicity,
        "error_bound": pair.error_bound if math.isfinite(pair.error_bound) else None,
        "vector": [complex_obj(c) for c in pair.vector.coeffs],
        "class1": report.class1.value,
        "class2": report.class2.value,
        "global_class": report.global_class.value,
        "defect": report.defect,
        "conjugate_partner": partner,
    }


def spectrum_doc(m, params, pairs, reports, partners) -> dict:
    return {
        "m": m,
        "params": params_obj(params),
        "eigenpairs": [eigenpair_obj(p, r, j) for p, r, j in zip(pairs, reports, partners)],
    }


def verify_doc(m, params, reports: Sequence[PropositionReport], h_norm: float) -> dict:
    return {
        "m": m,
        "params": params_obj(params),
        "norm_H": h_norm,
        "propositions": [
            {
                "id": r.proposition,
                "max_deviation": r.max_deviation,
                "threshold": r.threshold,
                "verdict": r.verdict,
                "vacuous": r.vacuous,
            }
            for r in reports
        ],
    }


def sweep_row(r: SweepResult) -> dict:
    row = {k: getattr(r, k) for k in SWEEP_COLUMNS}
    if r.spectrum is not None:
        row["spectrum"] = [complex_obj(z) for z in r.spectrum]
    return row


def sweep_doc(m, epsilon0, results: Sequence[SweepResult]) -> dict:
    return {"m": m, "epsilon0": epsilon0, "points": [sweep_row(r) for r in results]}


def boundary_doc(m, epsilon0, points: Sequence[BoundaryPoint]) -> dict:
    return {"m": m, "epsilon0": epsilon0, "boundaries": [asdict(p) for p in points]}


def to_json(doc) -> str:
    # repr-based float output is the shortest string that round-trips exactly
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def sweep_csv(results: Sequence[SweepResult]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in results:
        row = {k: getattr(r, k) for k in SWEEP_COLUMNS}
        row["error"] = row["error"] or ""
        writer.writerow(row)
    return buf.getvalue()


def boundary_csv(points: Sequence[BoundaryPoint]) -> str:
    buf = io.StringIO()
    fields = list(BoundaryPoint.__dataclass_fields__)
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for p in points:
        writer.writerow(asdict(p))
    return buf.getvalue()


def _fmt_complex(z: complex) -> str:
    return f"{z.real:+.6f}{z.imag:+.6f}j"


def spectrum_text(doc: dict) -> str:
    p = doc["params"]
    lines = [
        f"m={doc['m']}  epsilon0={p['epsilon0']:g}  gamma={p['gamma']:g}  alpha={p['alpha']:g}",
        f"{'lambda':>28}  {'real':>5}  {'class1':>13}  {'class2':>13}  {'global':>13}  {'residual':>9}",
    ]
    for e in doc["eigenpairs"]:
        z = complex(e["lambda"]["re"], e["lambda"]["im"])
        lines.append(
            f"{_fmt_complex(z):>28}  {str(e['is_real']):>5}  {e['class1']:>13}  "
            f"{e['class2']:>13}  {e['global_class']:>13}  {e['residual']:9.2e}"
        )
    return "\n".join(lines) + "\n"


def verify_text(doc: dict) -> str:
    lines = [f"m={doc['m']}  |H|={doc['norm_H']:.6g}"]
    for r in doc["propositions"]:
        verdict = "vacuous" if r["vacuous"] else ("PASS" if r["verdict"] else "FAIL")
        lines.append(f"{r['id']:<24} deviation={r['max_deviation']:.3e}  threshold={r['threshold']:.3e}  {verdict}")
    return "\n".join(lines) + "\n"


def sweep_text(results: Sequence[SweepResult]) -> str:
    lines = [f"{'gamma':>10} {'alpha':>10} {'n_real':>6} {'n_broken':>8} {'margin':>10} flags"]
    for r in results:
        flags = "error: " + r.error if r.error else ("marginal" if r.marginal else "")
        lines.append(
            f"{r.gamma:10.5g} {r.alpha:10.5g} {r.n_real:6d} {r.n_broken:8d} {r.min_imag_margin:10.3e} {flags}"
        )
    return "\n".join(lines) + "\n"


def boundary_text(points: List[BoundaryPoint]) -> str:
    if not points:
        return "no transition found\n"
    return "".join(
        f"{p.axis}={p.value:.9f}  (bracket {p.lower:.9f}..{p.upper:.9f}, "
        f"n_real {p.n_real_lower} -> {p.n_real_upper})\n"
        for p in points
    )
