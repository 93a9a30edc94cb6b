"""Deterministic text rendering for models and reports."""

from __future__ import annotations

from .kripke import KripkeInterpretation


def mask_str(mask: int, n: int) -> str:
    return "".join("1" if (mask >> w) & 1 else "0" for w in range(n))


def relvalue_str(value: int, n_individuals: int, n_worlds: int) -> str:
    cols = []
    for d in range(n_individuals):
        col = (value >> (d * n_worlds)) & ((1 << n_worlds) - 1)
        cols.append(f"d{d}:{mask_str(col, n_worlds)}")
    return " ".join(cols)


def render_model(m: KripkeInterpretation, indent: str = "") -> str:
    lines = [
        f"{indent}worlds: {m.n_worlds} (actual w0)",
        f"{indent}individuals: {m.n_individuals}",
    ]
    rows = []
    for w in range(m.n_worlds):
        rows.append("".join("1" if (w, v) in m.access else "0"
                            for v in range(m.n_worlds)))
    lines.append(f"{indent}R: " + " ".join(rows))
    if m.relspace:
        lines.append(f"{indent}relation space: {len(m.relspace)} relations")
    for name in sorted(m.denot):
        value = m.denot[name]
        sort = m.sig.consts.get(name)
        if isinstance(value, dict):
            if sort is not None and sort.kind == "so":
                parts = [
                    f"{relvalue_str(v, m.n_individuals, m.n_worlds)} -> "
                    f"{mask_str(value[v], m.n_worlds)}"
                    for v in sorted(value)
                ]
                lines.append(f"{indent}{name}:")
                for part in parts:
                    lines.append(f"{indent}  {part}")
            else:
                for key in sorted(value):
                    lines.append(
                        f"{indent}{name}{key}: {mask_str(value[key], m.n_worlds)}")
        elif sort is not None and sort.kind == "rel" and sort.arity == 1:
            lines.append(
                f"{indent}{name}: {relvalue_str(value, m.n_individuals, m.n_worlds)}")
        elif sort is not None and sort.kind == "ind":
            lines.append(f"{indent}{name}: d{value}")
        else:
            lines.append(f"{indent}{name}: {mask_str(value, m.n_worlds)}")
    return "\n".join(lines)
