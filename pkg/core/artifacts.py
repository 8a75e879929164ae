"""
Atomic writing of tabular artifacts.

Every CSV the pipeline writes starts with one provenance comment line

    # slopeunit-lgcp 0.1.0 config=<sha256> seed=<seed>

and is written to a temporary file in the target directory before being
renamed into place.
"""

import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from config import TOOL_NAME, TOOL_VERSION


@dataclass(frozen=True)
class Provenance:
    """Run identity recorded in every artifact header"""
    config_hash: str = "none"
    seed: Optional[int] = None

    def header_line(self) -> str:
        seed = "none" if self.seed is None else str(self.seed)
        return f"# {TOOL_NAME} {TOOL_VERSION} config={self.config_hash} seed={seed}"


def write_text_atomic(path: Union[str, Path], text: str) -> Path:
    """Write text to ``path`` via a temporary file and rename"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return target


def write_csv_atomic(path: Union[str, Path], frame: pd.DataFrame,
                     provenance: Optional[Provenance] = None) -> Path:
    """
    Write a DataFrame as CSV with a provenance header line.

    Floats are written with ``repr`` precision so that reloading the file
    reproduces the values exactly.
    """
    body = frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    header = (provenance or Provenance()).header_line()
    return write_text_atomic(path, f"{header}\n{body}")


def read_csv_artifact(path: Union[str, Path]) -> pd.DataFrame:
    """Read a CSV artifact, skipping provenance comment lines"""
    return pd.read_csv(path, comment="#")
