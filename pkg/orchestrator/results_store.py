"""
Results Store - writes the products of a run.

Handles:
- results.csv, one row per estimate, 17 significant digits
- report.txt, rich tables rendered to plain text
- manifest.json, config echo, version and instance digest
"""

import io
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

sys.path.insert(0, str(Path(__file__).parent.parent))

import pandas as pd
from loguru import logger
from rich.console import Console
from rich.table import Table

from shared.data_models import EstimateWithError, ModelParams, RelationReport, ScalingReport
from shared.utils import format_estimate, to_json

CSV_COLUMNS = [
    "task",
    "relation",
    "L",
    "B",
    "M",
    "delta",
    "t",
    "h",
    "sub_set_size",
    "lhs_mean",
    "lhs_se",
    "rhs_mean",
    "rhs_se",
    "residual",
    "combined_error",
    "z_score",
    "pass",
    "n_samples",
    "base_seed",
]

NAN = float("nan")


def _param_columns(params: Optional[ModelParams]) -> Dict[str, Any]:
    if params is None:
        return {key: NAN for key in ("L", "B", "M", "delta", "t", "h", "sub_set_size")}
    return {
        "L": params.L,
        "B": params.B,
        "M": params.M,
        "delta": params.delta,
        "t": params.t,
        "h": params.h,
        "sub_set_size": params.S,
    }


def relation_row(task: str, report: RelationReport) -> Dict[str, Any]:
    return {
        "task": task,
        "relation": report.name,
        **_param_columns(report.params),
        "lhs_mean": report.lhs.mean,
        "lhs_se": report.lhs.std_error,
        "rhs_mean": report.rhs.mean,
        "rhs_se": report.rhs.std_error,
        "residual": report.residual,
        "combined_error": report.combined_error,
        "z_score": report.z_score,
        "pass": report.passed,
        "n_samples": report.lhs.n_samples,
        "base_seed": report.plan.base_seed if report.plan else report.lhs.base_seed,
    }


def scaling_rows(task: str, report: ScalingReport) -> List[Dict[str, Any]]:
    """One row per L; lhs is the residual, rhs is its target 0."""
    rows = []
    for point in report.points:
        params = report.params.at_size(point.L) if report.params else None
        columns = _param_columns(params)
        columns["sub_set_size"] = point.sub_set_size
        columns["M"] = point.M
        residual = point.residual
        if residual.std_error > 0 and math.isfinite(residual.std_error):
            z = residual.mean / residual.std_error
        else:
            z = 0.0 if residual.mean == 0 else math.inf
        rows.append(
            {
                "task": task,
                "relation": report.name,
                **columns,
                "lhs_mean": residual.mean,
                "lhs_se": residual.std_error,
                "rhs_mean": 0.0,
                "rhs_se": 0.0,
                "residual": residual.mean,
                "combined_error": residual.std_error,
                "z_score": z,
                "pass": report.passed,
                "n_samples": residual.n_samples,
                "base_seed": report.plan.base_seed if report.plan else residual.base_seed,
            }
        )
    return rows


def estimate_row(
    task: str,
    name: str,
    params: ModelParams,
    lhs: EstimateWithError,
    rhs: Optional[EstimateWithError] = None,
) -> Dict[str, Any]:
    """Row for a plain estimate (sweep quantities, path points)."""
    return {
        "task": task,
        "relation": name,
        **_param_columns(params),
        "lhs_mean": lhs.mean,
        "lhs_se": lhs.std_error,
        "rhs_mean": rhs.mean if rhs else NAN,
        "rhs_se": rhs.std_error if rhs else NAN,
        "residual": NAN,
        "combined_error": NAN,
        "z_score": NAN,
        "pass": True,
        "n_samples": lhs.n_samples,
        "base_seed": lhs.base_seed,
    }


class ResultsStore:
    """Writes results.csv, report.txt and manifest.json into one directory."""

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)

    def write(
        self,
        rows: List[Dict[str, Any]],
        reports: List[Any],
        manifest: Dict[str, Any],
        title: str,
    ) -> Dict[str, Path]:
        """
        Write every output file.

        Returns:
            Mapping from product name to path
        """
        self.out_dir.mkdir(parents=True, exist_ok=True)

        paths = {
            "results": self.out_dir / "results.csv",
            "report": self.out_dir / "report.txt",
            "manifest": self.out_dir / "manifest.json",
        }

        frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
        frame.to_csv(paths["results"], index=False, float_format="%.17g")
        paths["report"].write_text(render_report(reports, title))
        paths["manifest"].write_text(to_json(manifest, pretty=True) + "\n")

        logger.info(f"Wrote {len(rows)} result rows to {self.out_dir}")
        return paths


def render_report(reports: List[Any], title: str) -> str:
    """Render relation and scaling reports as plain-text tables."""
    console = Console(record=True, width=140, file=io.StringIO(), color_system=None)

    relation_reports = [r for r in reports if isinstance(r, RelationReport)]
    scaling_reports = [r for r in reports if isinstance(r, ScalingReport)]

    if relation_reports:
        table = Table(title=f"{title}: relations")
        table.add_column("Relation", style="cyan")
        table.add_column("LHS")
        table.add_column("RHS")
        table.add_column("Residual")
        table.add_column("z")
        table.add_column("Result")
        for report in relation_reports:
            table.add_row(
                report.name,
                format_estimate(report.lhs.mean, report.lhs.std_error),
                format_estimate(report.rhs.mean, report.rhs.std_error),
                f"{report.residual:.3g}",
                f"{report.z_score:.3g}",
                "PASS" if report.passed else "FAIL",
            )
        console.print(table)

    for report in scaling_reports:
        table = Table(title=f"{title}: {report.name}")
        table.add_column("L", justify="right")
        table.add_column("M", justify="right")
        table.add_column("|S|", justify="right")
        table.add_column("Residual")
        for point in report.points:
            table.add_row(
                str(point.L),
                str(point.M),
                str(point.sub_set_size),
                format_estimate(point.residual.mean, point.residual.std_error),
            )
        console.print(table)
        slope = "n/a" if report.slope is None else f"{report.slope:.3g}"
        ci = "" if report.slope_ci is None else f" [{report.slope_ci[0]:.3g}, {report.slope_ci[1]:.3g}]"
        console.print(
            f"slope {slope}{ci}, monotone {report.monotone}, halved {report.halved}: "
            f"{'PASS' if report.passed else 'FAIL'}"
        )

    for report in reports:
        for note in getattr(report, "notes", []):
            console.print(f"note ({report.name}): {note}")

    failures = sum(1 for r in reports if not r.passed)
    console.print(f"{len(reports)} reports, {failures} failed")
    return console.export_text()
