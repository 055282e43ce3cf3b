"""Report bundles: a summary JSON, CSV tables, two-column plot data, and
rendered figures, all written deterministically.

Floats are serialized with 17 significant digits so identical runs produce
byte-identical bundles on any IEEE-754 binary64 platform.  The summary
references every other emitted file by relative path and content hash; it is
therefore always written last.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

PROVENANCES = ("formula", "oracle", "spectrum")

FLOAT_FMT = ".17g"


def format_number(x) -> str:
    """Render a number for CSV/JSON output; floats get 17 significant digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite numbers are not representable in reports")
    return format(x, FLOAT_FMT)


def dumps_canonical(obj, indent: int = 0) -> str:
    """Deterministic JSON: sorted keys, fixed float formatting, 2-space indent."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, float)):
        return format_number(obj)
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        out = out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
        return f'"{out}"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError(f"summary keys must be strings, got {key!r}")
            items.append(f"{inner}{dumps_canonical(key)}: {dumps_canonical(obj[key], indent + 1)}")
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{dumps_canonical(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(obj).__name__} into a report summary")


def result(value, provenance: str) -> dict:
    """A summary number tagged with how it was obtained."""
    if provenance not in PROVENANCES:
        raise ValueError(f"provenance must be one of {PROVENANCES}, got {provenance!r}")
    return {"value": value, "provenance": provenance}


def _render_figure(path: Path, series, xlabel: str, ylabel: str, title: str,
                   logx: bool, logy: bool) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, x, y in series:
        marker = "o" if len(x) <= 64 else None
        ax.plot(x, y, marker=marker, markersize=3.5, linewidth=1.2, label=label)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if len(series) > 1 or (series and series[0][0]):
        ax.legend(frameon=False)
    ax.grid(True, alpha=0.3)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


@dataclass
class ReportBundle:
    """Paths and content of one finished report."""

    out_dir: Path
    summary: dict
    files: list[str] = field(default_factory=list)

    @property
    def summary_path(self) -> Path:
        return self.out_dir / "summary.json"


class ReportWriter:
    """Accumulates tables, plot data and figures, then seals the summary."""

    def __init__(self, out_dir: str | Path):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self._files: list[str] = []

    def _register(self, relpath: str) -> str:
        self._files.append(relpath)
        return relpath

    def add_table(self, name: str, header: Sequence[str], rows: Iterable[Sequence]) -> str:
        """Write tables/<name>.csv; numeric cells use the canonical float format."""
        rel = f"tables/{name}.csv"
        path = self.out_dir / rel
        path.parent.mkdir(exist_ok=True)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(list(header))
            for row in rows:
                writer.writerow(
                    [c if isinstance(c, str) else format_number(c) for c in row]
                )
        return self._register(rel)

    def add_file(self, relpath: str) -> str:
        """Register a file written directly under the bundle directory."""
        if not (self.out_dir / relpath).exists():
            raise FileNotFoundError(f"{relpath} was not written under {self.out_dir}")
        return self._register(relpath)

    def add_plot(
        self,
        name: str,
        series: Sequence[tuple[str, Sequence, Sequence]],
        xlabel: str,
        ylabel: str,
        title: str = "",
        logx: bool = False,
        logy: bool = False,
    ) -> list[str]:
        """Write one two-column CSV per series plus a rendered figure.

        ``series`` holds (label, x, y) triples; the CSV for a labelled series
        is plotdata/<name>__<label>.csv, or plotdata/<name>.csv when there is
        a single unlabelled series.
        """
        written = []
        (self.out_dir / "plotdata").mkdir(exist_ok=True)
        for label, x, y in series:
            stem = f"{name}__{label}" if label else name
            stem = stem.replace(" ", "_").replace("/", "-")
            rel = f"plotdata/{stem}.csv"
            with open(self.out_dir / rel, "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["x", "y"])
                for xv, yv in zip(x, y):
                    writer.writerow([format_number(float(xv)), format_number(float(yv))])
            written.append(self._register(rel))
        (self.out_dir / "figures").mkdir(exist_ok=True)
        fig_rel = f"figures/{name}.png"
        _render_figure(self.out_dir / fig_rel, series, xlabel, ylabel, title, logx, logy)
        written.append(self._register(fig_rel))
        return written

    def finalize(self, summary: dict) -> ReportBundle:
        """Hash every emitted file into the summary and write summary.json."""
        manifest = []
        for rel in sorted(self._files):
            digest = hashlib.sha256((self.out_dir / rel).read_bytes()).hexdigest()
            manifest.append({"path": rel, "sha256": digest})
        summary = dict(summary)
        summary["files"] = manifest
        text = dumps_canonical(summary) + "\n"
        (self.out_dir / "summary.json").write_text(text)
        return ReportBundle(out_dir=self.out_dir, summary=summary, files=list(self._files))
