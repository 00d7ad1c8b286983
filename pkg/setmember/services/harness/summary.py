from typing import List

from setmember.schemas.results import SummaryRow
from setmember.services.harness.campaign import CampaignResult

SUMMARY_COLUMNS = ["mode", "N", "mean", "std", "failures", "censored"]


def summarize(result: CampaignResult) -> List[SummaryRow]:
    """
    One row per (arm, N) cell, sorted by (arm label, N).

    Mean and population standard deviation cover converged runs only; runs
    that hit the instant cap are counted in `censored` (and in `failures`)
    rather than averaged in at max_steps.
    """
    rows = []
    for arm in result.config.arms:
        for N in result.config.nodes:
            cell = result.cell(arm.label, N)
            counts = result.iterations(arm.label, N)
            rows.append(
                SummaryRow(
                    mode=arm.label,
                    N=N,
                    mean=float(counts.mean()) if counts.size else None,
                    std=float(counts.std()) if counts.size else None,
                    failures=len(cell) - counts.size,
                    censored=sum(r.status == "no-stop" for r in cell),
                    runs=len(cell),
                )
            )
    return sorted(rows, key=lambda row: (row.mode, row.N))


def summary_rows(rows: List[SummaryRow]) -> List[list]:
    """CSV body for summary.csv, in SUMMARY_COLUMNS order; empty cells for missing stats."""
    return [
        [
            "" if getattr(row, column) is None else getattr(row, column)
            for column in SUMMARY_COLUMNS
        ]
        for row in rows
    ]
