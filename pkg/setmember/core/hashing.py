import hashlib
import json
from typing import Any

from pydantic import BaseModel


def canonical_json(document: Any) -> str:
    """Serialize a config (model or plain dict) with sorted keys and no whitespace."""
    if isinstance(document, BaseModel):
        document = document.model_dump(mode="json")
    return json.dumps(document, sort_keys=True, separators=(",", ":"))


def config_hash(document: Any) -> str:
    """SHA-256 fingerprint of the canonical JSON form, recorded in run manifests."""
    return hashlib.sha256(canonical_json(document).encode()).hexdigest()
