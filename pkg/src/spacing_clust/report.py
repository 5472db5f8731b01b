"""
Clustering report model and its published JSON schema.
"""

import json
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict

SCHEMA_PATH = Path(__file__).resolve().parents[2] / "schemas" / "report.schema.json"


class ClusteringReport(BaseModel):
    """Metric bundle for one clustering; serializes to a flat JSON object."""
    model_config = ConfigDict(extra="forbid")

    algo: str
    k: int
    L: Optional[int] = None
    epsilon: Optional[float] = None
    seed: Optional[int] = None
    min_sp: float
    mst_sp: float
    sizes: List[int]
    quad_loss: Optional[float] = None
    runtime_s: Optional[float] = None

    def to_json(self) -> str:
        """Stable JSON text (key order fixed by field order)."""
        return json.dumps(self.model_dump(), indent=2) + "\n"


def report_schema() -> dict:
    return ClusteringReport.model_json_schema()


def write_schema(path: Union[str, Path] = SCHEMA_PATH):
    """Regenerate the published schema file."""
    Path(path).write_text(json.dumps(report_schema(), indent=2) + "\n")
