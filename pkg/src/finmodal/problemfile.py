"""Line-oriented problem files, proof-script files, and model configs.

Problem directives: sig, logic, const, bounds, premise, conjecture,
quantifiers, expect. Declarations come before the first formula line.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abstraction import (
    AxStep, ExpandStep, GenStep, HypStep, MpStep, NecStep, PremiseStep,
    ProofScript, QedStep,
)
from .aot import AczelConfig
from .formulas import (
    INDIVIDUAL, PROPOSITION, REL1, SECOND_ORDER, Relation, Var,
)
from .modelfind import Bounds
from .parser import ParseError, parse_formula, parse_term
from .printer import print_formula, print_term
from .signature import LogicTag, Mode, Signature


class ProblemFileError(Exception):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class Problem:
    sig: Signature
    premises: list
    conjectures: list
    bounds: Bounds
    expectation: str | None = None
    relvar_domain: str = "full"


_LOGICS = {"K": LogicTag.K, "KB": LogicTag.KB, "S5": LogicTag.S5TOTAL}
_EXPECTATIONS = ("unsat", "sat", "valid", "countermodel")


def _strip(line: str) -> str:
    if "#" in line:
        line = line[:line.index("#")]
    return line.strip()


def load_problem(path: str) -> Problem:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_problem(text)


def parse_problem(text: str) -> Problem:
    mode = Mode.CLASSICAL
    logic = LogicTag.S5TOTAL
    consts: dict = {}
    bounds_kw: dict = {}
    expectation = None
    relvar_domain = "full"
    formula_lines: list = []

    for no, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        parts = line.split(None, 1)
        head, rest = parts[0], (parts[1] if len(parts) > 1 else "")
        if head == "sig":
            if rest not in ("classical", "aot"):
                raise ProblemFileError(f"unknown signature mode {rest!r}", no)
            mode = Mode.AOT if rest == "aot" else Mode.CLASSICAL
        elif head == "logic":
            if rest not in _LOGICS:
                raise ProblemFileError(f"unknown logic {rest!r}", no)
            logic = _LOGICS[rest]
        elif head == "const":
            try:
                name, sort_text = [p.strip() for p in rest.split(":", 1)]
                consts[name] = _parse_sort(sort_text)
            except ValueError:
                raise ProblemFileError("expected 'const <name> : <sort>'", no)
        elif head == "bounds":
            for item in rest.split():
                key, _, value = item.partition("=")
                names = {"worlds": "max_worlds", "individuals": "max_individuals",
                         "relspace": "relspace_cap", "nesting": "quantifier_nesting"}
                if key not in names:
                    raise ProblemFileError(f"unknown bound {key!r}", no)
                bounds_kw[names[key]] = int(value)
        elif head == "expect":
            if rest not in _EXPECTATIONS:
                raise ProblemFileError(f"unknown expectation {rest!r}", no)
            expectation = rest
        elif head == "quantifiers":
            if rest != "rigid":
                raise ProblemFileError("only 'quantifiers rigid' is understood", no)
            relvar_domain = "rigid"
        elif head in ("premise", "conjecture"):
            formula_lines.append((no, head, rest))
        else:
            raise ProblemFileError(f"unknown directive {head!r}", no)

    sig = Signature(mode, logic, consts)
    premises, conjectures = [], []
    for no, kind, text_f in formula_lines:
        try:
            f = parse_formula(text_f, sig)
        except (ParseError, Exception) as e:
            raise ProblemFileError(str(e), no)
        (premises if kind == "premise" else conjectures).append(f)
    return Problem(sig, premises, conjectures, Bounds(**bounds_kw),
                   expectation, relvar_domain)


def _parse_sort(text: str):
    parts = text.split()
    if parts[0] == "ind":
        return INDIVIDUAL
    if parts[0] == "prop":
        return PROPOSITION
    if parts[0] == "so":
        return SECOND_ORDER
    if parts[0] == "rel":
        return Relation(int(parts[1])) if len(parts) > 1 else REL1
    raise ValueError(text)


# ---------------------------------------------------------------------------
# Proof-script files: one step per line, 1-based citations

_TERM_KEYS = {"alpha", "beta", "tau"}


def load_proof(path: str, sig: Signature):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_proof(fh.read(), sig)


def parse_proof(text: str, sig: Signature):
    """(layer name, ProofScript)"""
    layer_name = None
    steps: list = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        parts = line.split(None, 1)
        head, rest = parts[0], (parts[1] if len(parts) > 1 else "")
        try:
            if head == "layer":
                layer_name = rest.strip()
            elif head == "ax":
                name, _, subst_text = rest.partition("{")
                subst_text = subst_text.rsplit("}", 1)[0] if "}" in subst_text else ""
                steps.append(AxStep(name.strip(),
                                    _parse_subst(subst_text, sig)))
            elif head == "mp":
                i, j = rest.split()
                steps.append(MpStep(int(i) - 1, int(j) - 1))
            elif head == "nec":
                steps.append(NecStep(int(rest) - 1))
            elif head == "gen":
                i, var_name = rest.split()
                t = parse_term(var_name, sig)
                if not isinstance(t, Var):
                    raise ProblemFileError("gen needs a variable", no)
                steps.append(GenStep(int(i) - 1, t))
            elif head == "expand":
                steps.append(ExpandStep(int(rest) - 1))
            elif head == "premise":
                steps.append(PremiseStep(int(rest)))
            elif head == "hyp":
                steps.append(HypStep(parse_formula(rest, sig)))
            elif head == "qed":
                steps.append(QedStep(int(rest) - 1))
            else:
                raise ProblemFileError(f"unknown step {head!r}", no)
        except ProblemFileError:
            raise
        except Exception as e:
            raise ProblemFileError(str(e), no)
    if layer_name is None:
        raise ProblemFileError("missing 'layer' line", 1)
    return layer_name, ProofScript(tuple(steps))


def _parse_subst(text: str, sig: Signature) -> dict:
    out: dict = {}
    depth = 0
    item = ""
    items = []
    for ch in text:
        if ch == "," and depth == 0:
            items.append(item)
            item = ""
            continue
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        item += ch
    if item.strip():
        items.append(item)
    for piece in items:
        name, _, value = piece.partition(":")
        name = name.strip()
        value = value.strip()
        if name in _TERM_KEYS:
            out[name] = parse_term(value, sig)
        else:
            out[name] = parse_formula(value, sig)
    return out


def render_proof(layer_name: str, script: ProofScript) -> str:
    lines = [f"layer {layer_name}"]
    for step in script.steps:
        if isinstance(step, AxStep):
            items = []
            for name in sorted(step.subst):
                value = step.subst[name]
                rendered = (print_term(value) if isinstance(value, (Var,))
                            or name in _TERM_KEYS else print_formula(value))
                items.append(f"{name}: {rendered}")
            lines.append(f"ax {step.schema} {{{', '.join(items)}}}")
        elif isinstance(step, MpStep):
            lines.append(f"mp {step.i + 1} {step.j + 1}")
        elif isinstance(step, NecStep):
            lines.append(f"nec {step.i + 1}")
        elif isinstance(step, GenStep):
            lines.append(f"gen {step.i + 1} {step.var.name}")
        elif isinstance(step, ExpandStep):
            lines.append(f"expand {step.i + 1}")
        elif isinstance(step, PremiseStep):
            lines.append(f"premise {step.k}")
        elif isinstance(step, HypStep):
            lines.append(f"hyp {print_formula(step.formula)}")
        elif isinstance(step, QedStep):
            lines.append(f"qed {step.i + 1}")
        else:
            raise ValueError(f"cannot render {step!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Aczel-model configuration files

def load_aot_config(path: str) -> AczelConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_aot_config(fh.read())


def parse_aot_config(text: str) -> AczelConfig:
    kw: dict = {"consts": {}}
    concrete_bits: list = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        try:
            if head == "ordinary":
                kw["n_ordinary"] = int(parts[1])
            elif head == "special":
                kw["n_special"] = int(parts[1])
            elif head == "worlds":
                kw["n_worlds"] = int(parts[1])
            elif head == "actual":
                kw["actual"] = int(parts[1])
            elif head == "sigma":
                if parts[1] == "constant":
                    kw["sigma"] = ("constant",)
                elif parts[1] == "membership":
                    kw["sigma"] = ("membership", int(parts[2]))
                else:
                    raise ProblemFileError(f"unknown sigma rule {parts[1]!r}", no)
            elif head == "concrete":
                u = int(parts[1].lstrip("u"))
                w = int(parts[2].lstrip("w"))
                concrete_bits.append((u, w))
            elif head == "const":
                name, kind = parts[1], parts[2]
                if kind == "ordinary":
                    kw["consts"][name] = ("ordinary", int(parts[3]))
                elif kind == "abstract":
                    kw["consts"][name] = ("abstract",
                                          tuple(int(x) for x in parts[3:]))
                elif kind == "prop":
                    kw["consts"][name] = ("prop", int(parts[3], 0))
                elif kind == "rel":
                    kw["consts"][name] = ("rel", int(parts[3], 0))
                else:
                    raise ProblemFileError(f"unknown constant kind {kind!r}", no)
            else:
                raise ProblemFileError(f"unknown directive {head!r}", no)
        except ProblemFileError:
            raise
        except Exception as e:
            raise ProblemFileError(str(e), no)
    if concrete_bits:
        n_worlds = kw.get("n_worlds", 2)
        e_bang = 0
        for (u, w) in concrete_bits:
            e_bang |= 1 << (u * n_worlds + w)
        kw["e_bang"] = e_bang
    return AczelConfig(**kw)
