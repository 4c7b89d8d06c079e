"""
Report assembly: JSON documents, CSV tables and Markdown tables laid out
like the published ones.
"""
import enum
import io
import json
import os
from typing import Dict, Iterable, List, Optional, Sequence

import mpmath
import numpy as np
import pandas as pd

import narayana_repdigits
from narayana_repdigits.diophantine.matveev import BoundChainReport
from narayana_repdigits.diophantine.reduction import PUBLISHED_TABLES, SweepReport
from narayana_repdigits.diophantine.search import SolutionRecord, records_frame


class OutputFormat(enum.Enum):
    JSON = "json"
    CSV = "csv"
    MARKDOWN = "markdown"


BOUND_COLUMNS = ["g", "mode", "ell_bound", "m_bound", "n_bound", "k_bound", "ok"]
SWEEP_COLUMNS = ["step", "g", "instances", "flagged", "q_index", "epsilon", "bound",
                 "length_bound", "published_q_index", "published_epsilon", "published_bound"]

STEP_TITLES = {1: "Upper bound on l", 2: "Upper bound on m", 3: "Upper bound on n"}
STEP_SYMBOL = {1: "l", 2: "m", 3: "n"}


def provenance(config: Optional[dict] = None) -> dict:
    return {
        "tool": "narayana-repdigits",
        "version": narayana_repdigits.__version__,
        "libraries": {
            "mpmath": mpmath.__version__,
            "numpy": np.__version__,
            "pandas": pd.__version__,
        },
        "config": config or {},
    }


def bounds_frame(reports: Iterable[BoundChainReport]) -> pd.DataFrame:
    rows = [{"g": r.g, "mode": r.mode.value, "ell_bound": r.ell_bound, "m_bound": r.m_bound,
             "n_bound": r.n_bound, "k_bound": r.k_bound, "ok": r.ok} for r in reports]
    return pd.DataFrame(rows, columns=BOUND_COLUMNS)


def sweeps_frame(sweeps: Iterable[SweepReport]) -> pd.DataFrame:
    rows = []
    for s in sweeps:
        worst = s.worst
        published = PUBLISHED_TABLES[s.step].get(s.g)
        rows.append({
            "step": s.step,
            "g": s.g,
            "instances": len(s.instances),
            "flagged": len(s.flagged),
            "q_index": None if worst is None else worst.witness.t,
            "epsilon": None if s.smallest_epsilon is None else s.smallest_epsilon.witness.epsilon,
            "bound": s.bound,
            "length_bound": s.length_bound,
            "published_q_index": None if published is None else published.q_index,
            "published_epsilon": None if published is None else published.epsilon,
            "published_bound": None if published is None else published.bound,
        })
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def _cell(value) -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return ""
    if isinstance(value, (float, np.floating)):
        return "%.4g" % value
    return str(value)


def markdown_table(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = ["| " + " | ".join(header) + " |",
             "|" + "|".join("---" for _ in header) + "|"]
    for row in rows:
        lines.append("| " + " | ".join(_cell(v) for v in row) + " |")
    return "\n".join(lines) + "\n"


def frame_markdown(frame: pd.DataFrame) -> str:
    return markdown_table(list(frame.columns),
                          (list(row) for row in frame.itertuples(index=False)))


def sweep_markdown(sweeps: Sequence[SweepReport]) -> str:
    """ One table per step with a column per base: q_t, epsilon and the bound. """
    parts = []
    for step in sorted({s.step for s in sweeps}):
        by_g = sorted((s for s in sweeps if s.step == step), key=lambda s: s.g)
        header = ["g"] + [str(s.g) for s in by_g]
        q_row, eps_row, bound_row = ["q_t"], ["epsilon >="], [STEP_SYMBOL[step] + " <="]
        for s in by_g:
            worst, smallest = s.worst, s.smallest_epsilon
            q_row.append("" if worst is None else "q_%d" % worst.witness.t)
            eps_row.append("" if smallest is None else "%.2g" % smallest.witness.epsilon)
            bound_row.append(s.bound)
        parts.append("### %s (step %d)\n\n" % (STEP_TITLES[step], step)
                     + markdown_table(header, [q_row, eps_row, bound_row]))
    return "\n".join(parts)


def solutions_markdown(records: Iterable[SolutionRecord]) -> str:
    """ k, N_k and every factorization [a,b,c]_g found for that k. """
    by_k: Dict[int, List[SolutionRecord]] = {}
    for r in records:
        by_k.setdefault(r.k, []).append(r)
    rows = [(k, rs[0].value, ", ".join(r.notation for r in sorted(rs, key=lambda r: r.g)))
            for k, rs in sorted(by_k.items())]
    return markdown_table(["k", "N_k", "[a,b,c]_g"], rows)


class Document:
    """
    Sections of a report: a JSON-able payload per section plus optional
    tables for the CSV and Markdown renderings.
    """

    def __init__(self, config: Optional[dict] = None):
        self.payload = {"provenance": provenance(config)}
        self.frames: Dict[str, pd.DataFrame] = {}
        self.markdown: Dict[str, str] = {}

    def add(self, name: str, payload, frame: Optional[pd.DataFrame] = None,
            markdown: Optional[str] = None):
        self.payload[name] = payload
        if frame is not None:
            self.frames[name] = frame
        if markdown is not None:
            self.markdown[name] = markdown
        elif frame is not None:
            self.markdown[name] = frame_markdown(frame)

    def render(self, fmt: OutputFormat) -> Dict[str, str]:
        """ Rendered text per output file suffix ("" for the main file). """
        if fmt is OutputFormat.JSON:
            return {"": json.dumps(self.payload, indent=2, sort_keys=True, default=str) + "\n"}
        if fmt is OutputFormat.CSV:
            rendered = {}
            for name, frame in self.frames.items():
                buffer = io.StringIO()
                frame.to_csv(buffer, index=False, lineterminator="\n")
                rendered[name] = buffer.getvalue()
            return rendered
        text = ["# Narayana numbers as products of three repdigits\n"]
        config = self.payload["provenance"]["config"]
        text.append("Version %s, configuration `%s`\n"
                    % (self.payload["provenance"]["version"],
                       json.dumps(config, sort_keys=True, default=str)))
        for name, section in self.markdown.items():
            text.append("## %s\n\n%s" % (name, section))
        return {"": "\n".join(text)}

    def write(self, fmt: OutputFormat, out: Optional[str] = None, stream=None):
        rendered = self.render(fmt)
        if out is None:
            for name, text in rendered.items():
                if name and len(rendered) > 1:
                    stream.write("# %s\n" % name)
                stream.write(text)
                if len(rendered) > 1:
                    stream.write("\n")
            return []
        written = []
        stem, suffix = os.path.splitext(out)
        for name, text in rendered.items():
            path = out if not name or len(rendered) == 1 else "%s_%s%s" % (stem, name, suffix)
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
            written.append(path)
        return written


def solutions_payload(records: Iterable[SolutionRecord]) -> List[dict]:
    return [{"g": r.g, "k": r.k, "N_k": r.value,
             "factors": [{"value": f.value, "digit": f.digit, "length": f.length}
                         for f in r.factors],
             "notation": r.notation} for r in records]


def solutions_frame(records: Iterable[SolutionRecord]) -> pd.DataFrame:
    return records_frame(records)
