"""Report emission: JSON document, per-spectrum CSV tables, figures.

The JSON document is byte-stable for a fixed configuration and seed
(sorted keys, repr-exact floats, no timestamps).  Complex spectra are
stored as [re, im] pairs so a round trip through json preserves every
numerical value exactly.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict

import numpy as np

from .pipeline import AnalysisReport, SizeResult

__all__ = ["report_to_jsonable", "emit_report"]

SCHEMA_VERSION = 1

SPECTRUM_LABELS = ("operator", "resolvent", "inverse_hermitian", "resolvent_real_part")


def _complex_list(values: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex)]


def _spectra_jsonable(spectra: dict) -> dict:
    return {
        label: {
            "eigenvalues": _complex_list(table["eigenvalues"]),
            "s_numbers": [float(s) for s in table["s_numbers"]],
        }
        for label, table in spectra.items()
    }


def _size_sections(result: SizeResult) -> dict:
    constants = None
    if result.constants is not None:
        constants = {
            "main_coercivity": result.constants.main_coercivity,
            "main_bound": result.constants.main_bound,
            "perturbation_coercivity": result.constants.perturbation_coercivity,
            "perturbation_bound": result.constants.perturbation_bound,
            "form_bound": result.constants.form_bound,
        }
    sector = asdict(result.sector) if result.sector is not None else None
    margins = None
    if result.condition_margins is not None:
        margins = {
            "main_coercive": result.condition_margins.main_coercive,
            "main_bounded": result.condition_margins.main_bounded,
            "perturbation_coercive": result.condition_margins.perturbation_coercive,
            "perturbation_bounded": result.condition_margins.perturbation_bounded,
            "worst": result.condition_margins.worst,
        }
    return {
        "constants": constants,
        "sector": sector,
        "factorization_norms": result.factorization_norms or None,
        "aperture": result.aperture,
        "resolvent_aperture": result.resolvent_aperture,
        "split_condition_margins": margins,
        "error": result.error or None,
    }


def report_to_jsonable(report: AnalysisReport) -> dict:
    """Flatten an analysis report into plain JSON-ready data."""
    sections = {str(r.size): _size_sections(r) for r in report.size_results}
    checks = []
    for result in report.size_results:
        for check in result.checks:
            entry = check.to_dict()
            entry["size"] = result.size
            checks.append(entry)
        for skip in result.skipped:
            checks.append({**skip, "size": result.size, "skipped": True})
    for check in report.cross_checks:
        entry = check.to_dict()
        entry["size"] = "cross"
        checks.append(entry)
    for skip in report.cross_skipped:
        checks.append({**skip, "size": "cross", "skipped": True})
    return {
        "schema": SCHEMA_VERSION,
        "config": report.config.to_jsonable(),
        "constants": {k: v["constants"] for k, v in sections.items()},
        "sector": {k: v["sector"] for k, v in sections.items()},
        "factorization_norms": {k: v["factorization_norms"] for k, v in sections.items()},
        "apertures": {
            k: {"operator": v["aperture"], "resolvent": v["resolvent_aperture"]}
            for k, v in sections.items()
        },
        "split_condition_margins": {
            k: v["split_condition_margins"] for k, v in sections.items()
        },
        "spectra": {
            str(r.size): _spectra_jsonable(r.spectra) for r in report.size_results
        },
        "checks": checks,
        "fits": report.fits,
        "all_passed": report.all_passed,
    }


def _write_spectrum_csv(path: str, table: dict) -> None:
    eigs = np.asarray(table["eigenvalues"], dtype=complex)
    s_numbers = np.asarray(table["s_numbers"], dtype=float)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["index", "re", "im", "modulus", "s_number"])
        for i, (z, s) in enumerate(zip(eigs, s_numbers), start=1):
            writer.writerow([i, repr(float(z.real)), repr(float(z.imag)),
                             repr(float(abs(z))), repr(float(s))])


def emit_report(
    report: AnalysisReport,
    out_dir: str,
    formats: tuple = ("json", "csv"),
    plots: bool = True,
) -> list:
    """Write the report files under out_dir and return the written paths.

    Write failures propagate as OSError.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if "json" in formats:
        path = os.path.join(out_dir, "report.json")
        payload = json.dumps(report_to_jsonable(report), indent=2, sort_keys=True) + "\n"
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(payload)
        written.append(path)
    if "csv" in formats:
        spectra_dir = os.path.join(out_dir, "spectra")
        os.makedirs(spectra_dir, exist_ok=True)
        for result in report.size_results:
            for label, table in result.spectra.items():
                path = os.path.join(spectra_dir, f"{label}_n{result.size}.csv")
                _write_spectrum_csv(path, table)
                written.append(path)
    if plots:
        from . import plots as plots_module

        written.extend(plots_module.render_figures(report, os.path.join(out_dir, "figures")))
    return written
