import json
import os
import re
import tempfile

import pandas as pd


def file_slug(label: str) -> str:
    """Method label as a file name: "alpha=0.1" stays, "ascending-linear(lambda=0.035)" -> "ascending-linear_lambda=0.035" """

    return re.sub(r"[^A-Za-z0-9.=-]+", "_", label).strip("_")


def atomic_write_text(file_path: str, text: str):
    """Write through a sibling temp file so readers never see a partial file"""

    directory = os.path.dirname(file_path) or "."
    os.makedirs(directory, exist_ok=True)

    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp_", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, file_path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def write_json(data: dict, file_path: str):
    atomic_write_text(file_path, json.dumps(data, indent=2, ensure_ascii=False) + "\n")


def write_frame(frame: pd.DataFrame, file_path: str, float_format: str | None = None):
    atomic_write_text(
        file_path, frame.to_csv(index=False, float_format=float_format, lineterminator="\n")
    )
