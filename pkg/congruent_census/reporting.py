"""
Census report serialization: JSON, CSV and a plain-text summary.
"""

import csv
import io
from pathlib import Path
from typing import Dict, List, Optional, Union

from .models import CensusReport

CSV_COLUMNS = ["x", "class", "count", "ratio", "theory_fraction", "theory_decimal"]


def report_to_json(report: CensusReport) -> str:
    return report.model_dump_json(indent=2)


def report_from_json(text: str) -> CensusReport:
    return CensusReport.model_validate_json(text)


def _ratio_key(klass: str, ratios: Dict[str, Optional[float]]) -> Optional[str]:
    prefix = f"{klass}/"
    return next((key for key in ratios if key.startswith(prefix)), None)


def csv_rows(report: CensusReport) -> List[Dict[str, object]]:
    """One row per checkpoint per class, buckets included."""
    rows = []
    for checkpoint in report.checkpoints:
        classes = {**checkpoint.counts, **checkpoint.buckets}
        for klass, count in classes.items():
            key = _ratio_key(klass, checkpoint.ratios)
            theory = checkpoint.theory.get(key) if key else None
            ratio = checkpoint.ratios.get(key) if key else None
            rows.append(
                {
                    "x": checkpoint.x,
                    "class": klass,
                    "count": count,
                    "ratio": "" if ratio is None else repr(ratio),
                    "theory_fraction": theory.fraction if theory else "",
                    "theory_decimal": repr(theory.decimal) if theory else "",
                }
            )
    return rows


def report_to_csv(report: CensusReport) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(csv_rows(report))
    return buffer.getvalue()


def write_report(report: CensusReport, path: Union[str, Path]) -> None:
    """Write JSON, or CSV when the path ends in .csv."""
    target = Path(path)
    text = report_to_csv(report) if target.suffix == ".csv" else report_to_json(report)
    target.write_text(text, encoding="utf-8")


def render_text(report: CensusReport) -> str:
    cfg = report.config
    lines = [
        f"census x={cfg.x} k={cfg.k} filter={cfg.filter.value} "
        f"n_mod8={cfg.n_mod8 if cfg.n_mod8 is not None else '*'} convention={cfg.convention.value}"
    ]
    for checkpoint in report.checkpoints:
        counts = " ".join(f"{key}={value}" for key, value in checkpoint.counts.items())
        lines.append(f"x={checkpoint.x} {counts}")
        for key, value in checkpoint.ratios.items():
            if value is None:
                continue
            theory = checkpoint.theory.get(key)
            suffix = f" theory={theory.fraction} ({theory.decimal:.6f})" if theory else ""
            lines.append(f"  {key}={value:.6f}{suffix}")
    return "\n".join(lines)
