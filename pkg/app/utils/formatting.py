"""
Projections of the JSON documents to CSV and plain text

JSON (CohomologyResult.to_document) is the format of record; everything here
is derived from it.
"""
import csv
import io
from typing import List, Optional, Sequence

from app.schemas.schemas import CohomologyResult, TCTable


def result_to_json(result: CohomologyResult, indent: Optional[int] = 2) -> str:
    return result.to_json(indent=indent)


def _factor_text(p: int, factors: Sequence[int], multiplicity: int) -> str:
    parts = []
    for n in factors:
        if multiplicity > 1:
            parts.append(f"W_{n}(F_{p}^{multiplicity})")
        else:
            parts.append(f"Z/{p}^{n}" if n > 1 else f"Z/{p}")
    return " + ".join(parts)


def result_to_text(result: CohomologyResult) -> str:
    lines = [
        f"Z_{result.p}({result.i}) of k[x]/x^{result.e}, k = F_{result.p ** result.f}",
        f"precision N = {result.precision}, Wmax = {result.wmax}",
    ]
    for deg in range(3):
        towers = result.degree(deg).towers
        if not towers:
            lines.append(f"  H^{deg} = 0")
            continue
        lines.append(f"  H^{deg}:")
        for t in towers:
            label = "dense" if t.d is None else ("point" if t.d == 0 else f"d={t.d}")
            lines.append(f"    {label:>8}  {_factor_text(result.p, t.factors, t.multiplicity)}")
    lines.append(f"  saturated: {result.saturated}   validated: {result.validated}")
    for note in result.notes:
        lines.append(f"  note: {note}")
    return "\n".join(lines)


def result_to_csv(result: CohomologyResult) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["p", "e", "i", "f", "deg", "d", "factors", "multiplicity"])
    for deg in range(3):
        for t in result.degree(deg).towers:
            writer.writerow([
                result.p, result.e, result.i, result.f, deg,
                "" if t.d is None else t.d,
                " ".join(str(n) for n in t.factors),
                t.multiplicity,
            ])
    return buffer.getvalue()


def table_rows(results: Sequence[CohomologyResult]) -> List[dict]:
    """One row per i; the K column is only filled for e = 2"""
    rows = []
    for result in results:
        h1 = result.group(1)
        rows.append({
            "i": result.i,
            "h1": ";".join(
                f"{t.d}:{','.join(str(n) for n in t.factors)}" for t in result.degree(1).towers
            ),
            "k_degree": 2 * result.i - 1 if result.e == 2 else "",
            "order": result.p ** h1.order_exponent if result.e == 2 else "",
            "saturated": result.saturated,
            "validated": result.validated,
        })
    return rows


def table_to_csv(rows: Sequence[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(
        buffer,
        fieldnames=["i", "h1", "k_degree", "order", "saturated", "validated"],
        lineterminator="\n",
    )
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def table_to_text(rows: Sequence[dict]) -> str:
    lines = [f"{'i':>3}  {'H^1 (d:n)':<28} {'K':>5} {'order':>10}  validated"]
    for row in rows:
        k_label = f"K_{row['k_degree']}" if row["k_degree"] != "" else "-"
        lines.append(
            f"{row['i']:>3}  {row['h1']:<28} {k_label:>5} {str(row['order']):>10}  {row['validated']}"
        )
    return "\n".join(lines)


def tc_table_to_text(table: TCTable) -> str:
    lines = [f"pi_* TC(F_{table.p ** table.f}; Z_{table.p}) at precision {table.precision}"]
    for group in table.groups:
        text = "0" if not group.factors else _factor_text(table.p, group.factors, group.multiplicity)
        if group.saturated:
            text += "  (Z_p at precision)"
        lines.append(f"  pi_{group.degree:<4} {text}")
    return "\n".join(lines)


def tc_table_to_csv(table: TCTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["degree", "factors", "multiplicity", "saturated"])
    for group in table.groups:
        writer.writerow([group.degree, " ".join(str(n) for n in group.factors), group.multiplicity, group.saturated])
    return buffer.getvalue()
