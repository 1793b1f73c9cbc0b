"""
Results Table Component
Renders relative solutions, generators and oracle classes as pandas tables
"""

from pathlib import Path
from typing import Iterable, Optional, Union

import pandas as pd

from utils import format_element, format_quad

RELATIVE_COLUMNS = ["Exponents", "Sign", "X0", "Y0", "Source"]
GENERATOR_COLUMNS = ["Generator", "a2", "x1", "x2", "y1", "y2", "k", "Sign", "Relative"]
CLASS_COLUMNS = ["Generator", "a2", "x1", "x2", "y1", "y2"]


def relative_frame(solutions: Iterable) -> pd.DataFrame:
    """One row per relative solution"""
    rows = []
    for sol in solutions:
        rows.append({
            'Exponents': "-" if sol.exponents is None else str(tuple(sol.exponents)),
            'Sign': f"{sol.sign:+d}",
            'X0': format_quad(sol.X0.a, sol.X0.b),
            'Y0': format_quad(sol.Y0.a, sol.Y0.b),
            'Source': sol.source,
        })
    return pd.DataFrame(rows, columns=RELATIVE_COLUMNS)


def _coords_row(coords) -> dict:
    a2, x1, x2, y1, y2 = coords
    return {
        'Generator': format_element((0, a2, x1, x2, y1, y2)),
        'a2': a2, 'x1': x1, 'x2': x2, 'y1': y1, 'y2': y2,
    }


def generators_frame(records: Iterable) -> pd.DataFrame:
    """One row per generator record, with the k and sign it was found at"""
    rows = []
    for record in records:
        row = _coords_row(record.coords)
        row.update({'k': record.k, 'Sign': f"{record.sign:+d}", 'Relative': str(record.relative)})
        rows.append(row)
    return pd.DataFrame(rows, columns=GENERATOR_COLUMNS)


def classes_frame(classes: Iterable) -> pd.DataFrame:
    """One row per canonical (a2, x1, x2, y1, y2) class"""
    return pd.DataFrame([_coords_row(c) for c in classes], columns=CLASS_COLUMNS)


def print_table(df: pd.DataFrame, title: str) -> None:
    print(f"📊 {title} ({len(df)})")
    if df.empty:
        print("   (none)")
    else:
        print(df.to_string(index=False))


def export_csv(df: pd.DataFrame, path: Optional[Union[str, Path]]) -> None:
    if path:
        df.to_csv(path, index=False)
        print(f"✅ Wrote {len(df)} rows to {path}")
