"""Graph-formula language: parser, evaluator and compiler to type tables.

Grammar::

    spec    := { reldef }
    reldef  := "rel" NAME [ "(" varlist ")" ] ":=" ( formula | BUILTIN ) ";"
    formula := conj { "|" conj }
    conj    := lit { "&" lit }
    lit     := "!" lit | "(" formula ")" | atom
    atom    := "E" "(" VAR "," VAR ")" | "N" "(" VAR "," VAR ")"
             | VAR "=" VAR | VAR "!=" VAR

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import SpecSyntaxError
from .ktypes import EQ, E, KType, TypeTable, check_arity, enumerate_ktypes, pair_index, pair_label

BUILTIN_NAMES = (
    "H", "T", "P3", "Q3", "Q4", "R3", "R4", "R5", "E6", "L", "Tprime",
    "EDGE", "NONEDGE", "NEQ", "EQ",
)


# -- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeAtom:
    v: str
    w: str


@dataclass(frozen=True)
class EqAtom:
    v: str
    w: str


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    children: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["Formula", ...]


Formula = Union[EdgeAtom, EqAtom, Not, And, Or]


@dataclass(frozen=True)
class BuiltinRef:
    name: str


@dataclass
class RelDef:
    name: str
    variables: tuple[str, ...]
    body: Union[Formula, BuiltinRef]
    line: int = 0

    @property
    def arity(self) -> int:
        return len(self.variables)


def formula_variables(phi: Formula) -> tuple[str, ...]:
    """Variables in order of first occurrence."""
    seen: dict[str, None] = {}

    def walk(f):
        if isinstance(f, (EdgeAtom, EqAtom)):
            seen.setdefault(f.v)
            seen.setdefault(f.w)
        elif isinstance(f, Not):
            walk(f.child)
        else:
            for c in f.children:
                walk(c)

    walk(phi)
    return tuple(seen)


def n_atom(v: str, w: str) -> Formula:
    return And((Not(EdgeAtom(v, w)), Not(EqAtom(v, w))))


# -- lexer ------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<assign>:=)
  | (?P<neq>!=)
  | (?P<op>[|&!(),;=])
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SpecSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            value = m.group()
            toks.append(_Tok(value if kind in ("op", "assign", "neq") else kind, value, line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


# -- parser -----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = _lex(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        return SpecSyntaxError(msg, tok.line, tok.col)

    def expect(self, kind: str) -> _Tok:
        tok = self.tok
        if tok.kind != kind:
            got = tok.text or "end of input"
            raise self.error(f"expected {kind!r}, got {got!r}")
        self.i += 1
        return tok

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def spec(self) -> dict[str, RelDef]:
        env: dict[str, RelDef] = {}
        while self.tok.kind != "eof":
            start = self.tok
            d = self.reldef()
            if d.name in env:
                raise self.error(f"duplicate relation name {d.name!r}", start)
            env[d.name] = d
        return env

    def reldef(self) -> RelDef:
        kw = self.expect("name")
        if kw.text != "rel":
            raise self.error(f"expected 'rel', got {kw.text!r}", kw)
        name = self.expect("name").text
        declared = None
        if self.accept("("):
            declared = [self.expect("name").text]
            while self.accept(","):
                declared.append(self.expect("name").text)
            self.expect(")")
            if len(set(declared)) != len(declared):
                raise self.error(f"repeated variable in declaration of {name!r}", kw)
        self.expect(":=")
        body_tok = self.tok
        body = self.body()
        self.expect(";")
        if isinstance(body, BuiltinRef):
            from .relations import BUILTIN_ARITY

            arity = BUILTIN_ARITY[body.name]
            if declared is not None and len(declared) != arity:
                raise self.error(
                    f"{name!r} declares {len(declared)} variables but {body.name} has arity {arity}", body_tok
                )
            variables = tuple(declared) if declared else tuple(f"x{i + 1}" for i in range(arity))
        else:
            used = formula_variables(body)
            if declared is None:
                variables = used
            else:
                stray = [v for v in used if v not in declared]
                if stray:
                    raise self.error(f"undeclared variable {stray[0]!r} in {name!r}", body_tok)
                variables = tuple(declared)
            if not variables:
                raise self.error(f"relation {name!r} has no variables", body_tok)
        return RelDef(name, variables, body, kw.line)

    def body(self):
        tok = self.tok
        nxt = self.toks[self.i + 1]
        if tok.kind == "name" and nxt.kind == ";":
            if tok.text in BUILTIN_NAMES:
                self.i += 1
                return BuiltinRef(tok.text)
            raise self.error(f"unknown builtin {tok.text!r}")
        return self.formula()

    def formula(self) -> Formula:
        parts = [self.conj()]
        while self.accept("|"):
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Formula:
        parts = [self.lit()]
        while self.accept("&"):
            parts.append(self.lit())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def lit(self) -> Formula:
        if self.accept("!"):
            return Not(self.lit())
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def atom(self) -> Formula:
        tok = self.expect("name")
        if tok.text in ("E", "N") and self.tok.kind == "(":
            self.expect("(")
            v = self.expect("name").text
            self.expect(",")
            w = self.expect("name").text
            self.expect(")")
            return EdgeAtom(v, w) if tok.text == "E" else n_atom(v, w)
        if self.accept("="):
            return EqAtom(tok.text, self.expect("name").text)
        if self.accept("!="):
            return Not(EqAtom(tok.text, self.expect("name").text))
        raise self.error(f"expected an atom after {tok.text!r}")


def parse_spec(text: str) -> dict[str, RelDef]:
    """Parse a spec into an ordered map from relation name to definition."""
    return _Parser(text).spec()


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.expect("eof")
    return f


# -- evaluation -------------------------------------------------------------

def eval_formula(phi: Formula, t: KType, variables: tuple[str, ...] | None = None) -> bool:
    """Truth of ``phi`` on any tuple of type ``t``."""
    variables = variables or formula_variables(phi)
    if len(variables) != t.arity:
        raise ValueError(f"formula has {len(variables)} variables, type has arity {t.arity}")
    pos = {v: i for i, v in enumerate(variables)}

    def ev(f) -> bool:
        if isinstance(f, EdgeAtom):
            i, j = pos[f.v], pos[f.w]
            return i != j and pair_label(t, i, j) == E
        if isinstance(f, EqAtom):
            i, j = pos[f.v], pos[f.w]
            return i == j or pair_label(t, i, j) == EQ
        if isinstance(f, Not):
            return not ev(f.child)
        if isinstance(f, And):
            return all(ev(c) for c in f.children)
        return any(ev(c) for c in f.children)

    return ev(phi)


@lru_cache(maxsize=None)
def _all_labels(k: int) -> np.ndarray:
    types = enumerate_ktypes(k, allow_large_arity=True)
    mat = np.zeros((len(types), k * (k - 1) // 2), dtype=np.uint8)
    for r, t in enumerate(types):
        mat[r] = t.labels
    return mat


def _eval_vec(phi: Formula, k: int, variables: tuple[str, ...]) -> np.ndarray:
    labels = _all_labels(k)
    n = labels.shape[0]
    pos = {v: i for i, v in enumerate(variables)}

    def ev(f) -> np.ndarray:
        if isinstance(f, (EdgeAtom, EqAtom)):
            i, j = pos[f.v], pos[f.w]
            if i == j:
                return np.full(n, isinstance(f, EqAtom))
            col = labels[:, pair_index(k, i, j)]
            return col == (E if isinstance(f, EdgeAtom) else EQ)
        if isinstance(f, Not):
            return ~ev(f.child)
        acc = ev(f.children[0])
        for c in f.children[1:]:
            acc = (acc & ev(c)) if isinstance(f, And) else (acc | ev(c))
        return acc

    return ev(phi)


def compile_table(phi: Formula, k: int | None = None, variables: tuple[str, ...] | None = None,
                  allow_large_arity: bool = False) -> TypeTable:
    """All k-types on which ``phi`` holds."""
    variables = variables or formula_variables(phi)
    k = len(variables) if k is None else k
    if k != len(variables):
        raise ValueError(f"formula has {len(variables)} variables, asked for arity {k}")
    check_arity(k, allow_large_arity)
    mask = _eval_vec(phi, k, variables)
    types = enumerate_ktypes(k, allow_large_arity=True)
    return TypeTable(k, (types[r] for r in np.flatnonzero(mask)))


@dataclass
class Language:
    """A parsed spec with every relation compiled to its type table."""

    defs: dict[str, RelDef]
    tables: dict[str, TypeTable] = field(default_factory=dict)

    def __iter__(self):
        return iter(self.defs)

    def __getitem__(self, name: str) -> TypeTable:
        return self.tables[name]

    @property
    def names(self) -> list[str]:
        return list(self.defs)


def load_spec(text: str, allow_large_arity: bool = False) -> Language:
    from .relations import builtin_table

    defs = parse_spec(text)
    lang = Language(defs)
    for name, d in defs.items():
        if isinstance(d.body, BuiltinRef):
            check_arity(d.arity, allow_large_arity)
            lang.tables[name] = builtin_table(d.body.name)
        else:
            lang.tables[name] = compile_table(d.body, variables=d.variables, allow_large_arity=allow_large_arity)
    return lang
