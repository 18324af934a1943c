from typing import List, Optional

import logging

import pandas as pd

from src.state.types import ClaimsReport, ReconstructionReport, ScanRecord, ZeroSearchResult

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)


def _banner(title: str) -> None:
    print("\n" + "=" * 50)
    print(title)
    print("=" * 50)


def display_scan_summary(records: List[ScanRecord], scenario: str, out_path: Optional[str] = None):
    """Summary of a scan: range, extremes of |det| and entanglement"""

    _banner(f"SCAN: {scenario}")
    if not records:
        print("\n[ERROR] No records")
        return

    df = pd.DataFrame(
        {
            "t": [r.t for r in records],
            "entropy": [r.entropy for r in records],
            "eof": [r.eof for r in records],
            "abs_delta": [r.abs_delta for r in records],
        }
    )
    print(f"Grid: {len(records)} points on [{records[0].t:g}, {records[-1].t:g}]")

    peak = df.loc[df["abs_delta"].idxmax()]
    print(f"Largest |det Omega|: {peak['abs_delta']:.6g} at t = {peak['t']:.6g}")

    for column, label in (("entropy", "Entropy"), ("eof", "Entanglement of formation")):
        values = df[column].dropna()
        if not values.empty:
            print(f"{label}: min {values.min():.6g}, max {values.max():.6g}")

    if out_path:
        print(f"\n[FILES GENERATED]: {out_path}")


def display_zeros(result: ZeroSearchResult, scenario: str):
    """Entanglement zeros found in the searched interval"""

    _banner(f"ENTANGLEMENT ZEROS: {scenario}")
    a, b = result.interval
    print(f"Interval: [{a:g}, {b:g}]")

    if result.everywhere:
        print("Entanglement vanishes at every grid point")
        return
    if not result.zeros:
        print(f"No zeros found ({result.candidates} candidate minima refined)")
        return

    for i, t in enumerate(result.zeros, 1):
        print(f"  {i}. t* = {t:.12g}")


def display_claims(report: ClaimsReport):
    """Verdict table, then the numbers behind each failure"""

    _banner(f"CLAIMS: {report.scenario}")
    table = pd.DataFrame(
        [{"claim": v.claim, "status": v.status.upper(), "detail": v.detail} for v in report.verdicts]
    )
    print(table.to_markdown(index=False))

    for verdict in report.failures:
        print(f"\n[FAILED] {verdict.claim}")
        for key, value in verdict.measured.items():
            print(f"  {key}: {value}")
        for key, value in verdict.thresholds.items():
            print(f"  limit {key}: {value}")

    if report.all_passed:
        print("\nAll evaluated claims hold")


def display_reconstruction(report: ReconstructionReport):
    """Recovered against true coherence vector"""

    _banner(f"RECONSTRUCTION: {report.scenario} at t = {report.t:g}")
    table = pd.DataFrame(
        {"truth": report.truth, "recovered": report.recovered},
        index=[f"r{i + 1}" for i in range(len(report.truth))],
    )
    print(table.to_markdown(floatfmt=".12g"))

    condition = "inf" if report.condition is None else f"{report.condition:.6g}"
    print(f"\ndet Omega: {report.delta:.6g}")
    print(f"Condition number: {condition}")
    print(f"Residual: {report.residual:.3e}")
    print(f"Error vs truth: {report.error:.3e}")
    if not report.valid:
        print(f"\n[WARNING] Recovered state is not physical: {report.validity_error}")
