import json
import os
from typing import Any, Dict, Iterable, List, Mapping

import pandas as pd


def sanitize_row(row: Mapping[str, Any], fields: List[str]) -> Dict[str, Any]:
    return {field: row.get(field, None) for field in fields}


def write_rows_to_csv(
        rows: Iterable[Mapping[str, Any]],
        file_path: str,
        fieldnames: List[str]
    ) -> None:
    """Write rows with an exact header; the file is replaced, never appended."""
    directory = os.path.dirname(file_path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    df = pd.DataFrame([sanitize_row(row, fieldnames) for row in rows], columns=fieldnames)
    df.to_csv(file_path, index=False, lineterminator="\n")


def render_jsonl(records: Iterable[Mapping[str, Any]]) -> str:
    return "".join(
        json.dumps(dict(record), sort_keys=True, separators=(",", ":")) + "\n"
        for record in records
    )


def write_jsonl(records: Iterable[Mapping[str, Any]], file_path: str) -> None:
    directory = os.path.dirname(file_path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    with open(file_path, "w", newline="\n", encoding="utf-8") as file:
        file.write(render_jsonl(records))
