"""JSON wire formats: matrices, states, protocol reports, comparisons.

All floats are printed as decimals with 12 significant digits, so repeated
runs are byte-identical and parse-print round trips stay within 1e-12.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .linalg import as_complex_array
from .protocol import BranchSummary, ProtocolReport, SwapComparison
from .states import DensityMatrix, Ket, QubitState, validate_density

SIGNIFICANT_DIGITS = 12


def round_sig(x: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    """Round to the given number of significant decimal digits."""
    return float(f"{float(x):.{digits}g}")


def _number(x: float) -> float | int:
    r = round_sig(x)
    return int(r) if r.is_integer() and abs(r) < 2**53 else r


def complex_pair(z: complex) -> list[float | int]:
    return [_number(z.real), _number(z.imag)]


def matrix_to_json(m: np.ndarray) -> dict[str, Any]:
    m = as_complex_array(m)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [complex_pair(z) for z in m.reshape(-1)],
    }


def matrix_from_json(doc: dict[str, Any]) -> np.ndarray:
    rows, cols = int(doc["rows"]), int(doc["cols"])
    entries = doc["entries"]
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    return as_complex_array(flat.reshape(rows, cols))


def density_to_json(rho: DensityMatrix) -> dict[str, Any]:
    return {"kind": "density", **matrix_to_json(rho.matrix)}


def density_from_json(doc: dict[str, Any]) -> DensityMatrix:
    if doc.get("kind") != "density":
        raise ValueError(f"expected kind 'density', got {doc.get('kind')!r}")
    return validate_density(matrix_from_json(doc))


def ket_to_json(k: Ket) -> dict[str, Any]:
    return {"kind": "ket", "amplitudes": [complex_pair(z) for z in k.amplitudes]}


def ket_from_json(doc: dict[str, Any]) -> Ket:
    if doc.get("kind") != "ket":
        raise ValueError(f"expected kind 'ket', got {doc.get('kind')!r}")
    return Ket(np.array([complex(re, im) for re, im in doc["amplitudes"]], dtype=complex))


def qubit_to_json(psi: QubitState) -> dict[str, Any]:
    return {"alpha": complex_pair(psi.alpha), "beta": complex_pair(psi.beta)}


def report_to_json(report: ProtocolReport) -> dict[str, Any]:
    """ProtocolReport document; key order is part of the format."""
    return {
        "mode": report.mode,
        "seed": report.seed,
        "resource_index": report.resource_index,
        "paper_extension": report.paper_extension,
        "input_state": qubit_to_json(report.input_state),
        "outcome": report.outcome,
        "outcome_probabilities": [_number(p) for p in report.outcome_probabilities],
        "fidelity": _number(report.fidelity),
        "output_entropy_bits": _number(report.output_entropy_bits),
        "marginal_3": density_to_json(report.marginal_3),
        "marginal_12": density_to_json(report.marginal_12),
        "output_density": density_to_json(report.output_density),
    }


def _branch_to_json(branch: BranchSummary) -> dict[str, Any]:
    return {
        "requires_bell_resource": branch.requires_bell_resource,
        "fidelity_3": _number(branch.fidelity_3),
        "purity_12": _number(branch.purity_12),
        "entropy_12_bits": _number(branch.entropy_12_bits),
        "purity_3": _number(branch.purity_3),
        "entropy_3_bits": _number(branch.entropy_3_bits),
        "marginal_12": density_to_json(branch.marginal_12),
        "marginal_3": density_to_json(branch.marginal_3),
    }


def comparison_to_json(comparison: SwapComparison) -> dict[str, Any]:
    return {
        "input_state": qubit_to_json(comparison.input_state),
        "teleport": _branch_to_json(comparison.teleport),
        "swap": _branch_to_json(comparison.swap),
    }


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2)
