# syntax/printer.py
from syntax.ast import Discard, Gate, Hole, Meas, NewQbit, QCase, Seq, Skip, Statement, Unitary, While


def pretty_gate(gate: Gate) -> str:
    if gate.is_named:
        return gate.name
    return "U(" + ", ".join(repr(float(x)) for x in gate.reals()) + ")"


def pretty(s: Statement) -> str:
    """Single-line source text that parses back to ``s``."""
    if isinstance(s, Skip):
        return "skip"
    if isinstance(s, NewQbit):
        return f"new qbit {s.var}"
    if isinstance(s, Discard):
        return f"discard {s.var}"
    if isinstance(s, Unitary):
        return f"{s.var} *= {pretty_gate(s.gate)}"
    if isinstance(s, Seq):
        # ';' associates to the right, so a nested left operand needs parentheses
        left = pretty(s.s0)
        if isinstance(s.s0, Seq):
            left = f"({left})"
        return f"{left}; {pretty(s.s1)}"
    if isinstance(s, Meas):
        return f"meas {s.var} (0 -> {pretty(s.s0)}, 1 -> {pretty(s.s1)})"
    if isinstance(s, QCase):
        return f"qcase {s.var} (0 -> {pretty(s.s0)}, 1 -> {pretty(s.s1)})"
    if isinstance(s, While):
        body = pretty(s.body)
        if isinstance(s.body, Seq):
            body = f"({body})"
        return f"while {s.var} do {body}"
    if isinstance(s, Hole):
        return f"[{', '.join(s.in_env)} -> {', '.join(s.out_env)}]"
    raise TypeError(f"not a statement: {s!r}")


def pretty_block(s: Statement, indent: str = "  ") -> str:
    """Multi-line layout for long programs; parses to the same AST as ``pretty``."""
    return "\n".join(_block_lines(s, 0, indent))


def _block_lines(s: Statement, depth: int, indent: str):
    pad = indent * depth
    if isinstance(s, Seq):
        parts = []
        node = s
        while isinstance(node, Seq):
            parts.append(node.s0)
            node = node.s1
        parts.append(node)
        for k, part in enumerate(parts):
            lines = list(_block_lines(part, depth, indent))
            if isinstance(part, Seq):
                lines[0] = pad + "(" + lines[0][len(pad):]
                lines[-1] = lines[-1] + ")"
            if k < len(parts) - 1:
                lines[-1] = lines[-1] + ";"
            yield from lines
        return
    if isinstance(s, (Meas, QCase)):
        keyword = "meas" if isinstance(s, Meas) else "qcase"
        yield f"{pad}{keyword} {s.var} ("
        first = list(_block_lines(s.s0, depth + 2, indent))
        second = list(_block_lines(s.s1, depth + 2, indent))
        yield f"{pad}{indent}0 ->"
        first[-1] = first[-1] + ","
        yield from first
        yield f"{pad}{indent}1 ->"
        yield from second
        yield f"{pad})"
        return
    yield pad + pretty(s)
