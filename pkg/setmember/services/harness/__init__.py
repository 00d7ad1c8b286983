from setmember.services.harness.campaign import (
    CampaignResult,
    execute_run,
    run_campaign,
    run_seed,
)
from setmember.services.harness.reference import (
    ReferenceSet,
    distance_to_reference,
    reference_set,
)
from setmember.services.harness.summary import SUMMARY_COLUMNS, summarize, summary_rows

__all__ = [
    "CampaignResult",
    "ReferenceSet",
    "SUMMARY_COLUMNS",
    "distance_to_reference",
    "reference_set",
    "execute_run",
    "run_campaign",
    "run_seed",
    "summarize",
    "summary_rows",
]
