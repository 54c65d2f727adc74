"""The line-oriented presentation language.

::

    # comments run to the end of the line
    group H = Z(2) * free(1)
    letters a, b, e
    elem h1 = 1:1
    relator R = e {h1} a^-1 {h1}{2:g1}
    word w = a b^2

Bare tokens are letters (``x^k`` repeats, negative ``k`` inverts), ``{name}``
is a declared element, and any other brace content is read as an element
literal of ``H``. Adjacent coefficients multiply in ``H``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from ..core.groups import (
    CoefficientGroup,
    CyclicGroup,
    FreeGroup,
    FreeProductGroup,
    GroupError,
    PermutationGroup,
    TableGroup,
    TrivialGroup,
    parse_cycles,
)
from ..core.relators import RelativePresentation, from_atoms
from ..core.words import Coeff, SignedLetter, format_key


class DSLError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message, self.line, self.col = message, line, col


_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_']*")
_LETTER_TOK = re.compile(r"([A-Za-z][A-Za-z0-9_']*)(?:\^(-?\d+))?")


@dataclass
class PresentationDocument:
    group_name: str = "H"
    group: CoefficientGroup | None = None
    letters: tuple = ()
    elems: dict = field(default_factory=dict)  # name -> element
    relators: dict = field(default_factory=dict)  # name -> RelativeRelator
    words: dict = field(default_factory=dict)  # name -> tuple of atoms

    def __eq__(self, other) -> bool:
        if not isinstance(other, PresentationDocument):
            return NotImplemented
        return (
            self.group_name == other.group_name
            and self.group == other.group
            and self.letters == other.letters
            and self.elems == other.elems
            and self.relators == other.relators
            and self.words == other.words
        )

    def presentation(self, relator: str | None = None) -> RelativePresentation:
        if not self.relators:
            raise ValueError("document declares no relator")
        if relator is None:
            R = next(iter(self.relators.values()))
        elif relator in self.relators:
            R = self.relators[relator]
        else:
            raise KeyError(f"no relator named {relator!r}")
        return RelativePresentation(self.letters, self.group, (R,))

    def word(self, text: str) -> list:
        """A declared word by name, or ``text`` read as a mixed word."""
        if text in self.words:
            return list(self.words[text])
        return _Parser.inline(self, text)

    def format(self) -> str:
        return format_document(self)


def _fmt_letter(s: SignedLetter) -> str:
    name = format_key(s.name)
    return name if s.exp == 1 else f"{name}^-1"


def _fmt_coeff(doc: PresentationDocument, h) -> str:
    for name, v in doc.elems.items():
        if v == h:
            return "{" + name + "}"
    return "{" + doc.group.format_element(h) + "}"


def format_atoms(doc: PresentationDocument, atoms) -> str:
    parts = []
    for a in atoms:
        if isinstance(a, Coeff):
            if not doc.group.is_identity(a.value):
                parts.append(_fmt_coeff(doc, a.value))
        else:
            parts.append(_fmt_letter(a))
    return " ".join(parts) or "1"


def format_document(doc: PresentationDocument) -> str:
    lines = [f"group {doc.group_name} = {doc.group.describe()}"]
    if doc.letters:
        lines.append("letters " + ", ".join(format_key(x) for x in doc.letters))
    for name, h in doc.elems.items():
        lines.append(f"elem {name} = {doc.group.format_element(h)}")
    for name, R in doc.relators.items():
        lines.append(f"relator {name} = {format_atoms(doc, R.atoms())}")
    for name, w in doc.words.items():
        lines.append(f"word {name} = {format_atoms(doc, w)}")
    return "\n".join(lines) + "\n"


class _Parser:
    def __init__(self, text: str, base: Path | None):
        self.text = text
        self.base = base
        self.doc = PresentationDocument()
        self.names: set = set()

    @classmethod
    def inline(cls, doc: PresentationDocument, text: str) -> list:
        p = cls("", None)
        p.doc = doc
        return p.mixed(text, 1, 1)

    def run(self) -> PresentationDocument:
        for n, raw in enumerate(self.text.splitlines(), start=1):
            line = raw.split("#", 1)[0]
            if not line.strip():
                continue
            self.statement(line, n)
        if self.doc.group is None:
            raise DSLError("missing 'group' declaration", 1, 1)
        return self.doc

    def statement(self, line: str, n: int) -> None:
        m = re.match(r"\s*([A-Za-z]+)", line)
        if not m:
            raise DSLError("expected a keyword", n, _col(line))
        kw, rest_at = m.group(1), m.end()
        if kw == "letters":
            self.letters(line, rest_at, n)
            return
        if kw not in ("group", "elem", "relator", "word"):
            raise DSLError(f"unknown keyword {kw!r}", n, m.start(1) + 1)
        m2 = re.compile(r"\s*([A-Za-z][A-Za-z0-9_']*)\s*=").match(line, rest_at)
        if not m2:
            raise DSLError(f"expected '{kw} NAME = ...'", n, rest_at + 1)
        name, body_at = m2.group(1), m2.end()
        body = line[body_at:]
        if kw == "group":
            if self.doc.group is not None:
                raise DSLError("group declared twice", n, m.start(1) + 1)
            self.doc.group_name = name
            self.doc.group = self.group_expr(body, n, body_at)
            return
        if self.doc.group is None:
            raise DSLError(f"'{kw}' before the group declaration", n, m.start(1) + 1)
        if name in self.names:
            raise DSLError(f"name {name!r} declared twice", n, m2.start(1) + 1)
        self.names.add(name)
        if kw == "elem":
            try:
                self.doc.elems[name] = self.doc.group.parse_element(body)
            except GroupError as exc:
                raise DSLError(str(exc), n, body_at + _col(body)) from None
        elif kw == "relator":
            atoms = self.mixed(body, n, body_at + 1)
            if not any(isinstance(a, SignedLetter) for a in atoms):
                raise DSLError("a relator needs at least one letter", n, body_at + _col(body))
            self.doc.relators[name] = from_atoms(atoms, self.doc.group)
        else:
            self.doc.words[name] = tuple(_fold(self.mixed(body, n, body_at + 1), self.doc.group))

    def letters(self, line: str, at: int, n: int) -> None:
        if self.doc.letters:
            raise DSLError("letters declared twice", n, _col(line))
        names = []
        for m in re.finditer(r"[^\s,]+", line[at:]):
            tok = m.group(0)
            if not _IDENT.fullmatch(tok):
                raise DSLError(f"bad letter name {tok!r}", n, at + m.start() + 1)
            if tok in names:
                raise DSLError(f"letter {tok!r} declared twice", n, at + m.start() + 1)
            names.append(tok)
        if not names:
            raise DSLError("empty letter list", n, at + 1)
        self.doc.letters = tuple(names)

    # group expressions: factor ('*' factor)*
    def group_expr(self, body: str, n: int, offset: int) -> CoefficientGroup:
        factors = []
        depth, start = 0, 0
        pieces = []
        for i, ch in enumerate(body):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "*" and depth == 0:
                pieces.append((start, body[start:i]))
                start = i + 1
        pieces.append((start, body[start:]))
        for at, piece in pieces:
            factors.append(self.group_factor(piece, n, offset + at))
        return factors[0] if len(factors) == 1 else FreeProductGroup(factors)

    def group_factor(self, piece: str, n: int, offset: int) -> CoefficientGroup:
        col = offset + _col(piece)
        text = piece.strip()
        try:
            if text == "trivial":
                return TrivialGroup()
            if text == "Z":
                return CyclicGroup(0)
            m = re.fullmatch(r"Z\(\s*(\d+)\s*\)", text)
            if m:
                if int(m.group(1)) < 1:
                    raise DSLError("Z(n) needs n >= 1", n, col)
                return CyclicGroup(int(m.group(1)))
            m = re.fullmatch(r"free\(\s*(\d+)\s*\)", text)
            if m:
                return FreeGroup(int(m.group(1)))
            m = re.fullmatch(r"table\s+(\S+)", text)
            if m:
                path = Path(m.group(1))
                full = path if path.is_absolute() or self.base is None else self.base / path
                if not full.exists():
                    raise DSLError(f"table file {m.group(1)!r} not found", n, col)
                return TableGroup.from_file(full, display=m.group(1))
            m = re.fullmatch(r"perm\(\s*(\d+)\s*:(.*)\)", text)
            if m:
                d = int(m.group(1))
                gens = [parse_cycles(g, d) for g in re.findall(r"(?:\([^()]*\))+", m.group(2))]
                return PermutationGroup(d, gens)
            if text.startswith("(") and text.endswith(")"):
                return self.group_expr(text[1:-1], n, col)
        except GroupError as exc:
            raise DSLError(str(exc), n, col) from None
        raise DSLError(f"unknown group expression {text!r}", n, col)

    def mixed(self, body: str, n: int, offset: int) -> list:
        """Letters and coefficients; ``offset`` is the column of ``body[0]``."""
        doc = self.doc
        atoms: list = []
        i = 0
        while i < len(body):
            ch = body[i]
            if ch.isspace():
                i += 1
                continue
            col = offset + i
            if ch == "{":
                j = body.find("}", i)
                if j < 0:
                    raise DSLError("unclosed '{'", n, col)
                inner = body[i + 1 : j].strip()
                if inner in doc.elems:
                    atoms.append(Coeff(doc.elems[inner]))
                else:
                    try:
                        atoms.append(Coeff(doc.group.parse_element(inner)))
                    except GroupError:
                        raise DSLError(f"unknown element {inner!r}", n, col) from None
                i = j + 1
                continue
            m = re.compile(r"[^\s{}]+").match(body, i)
            tok = m.group(0)
            i = m.end()
            if tok == "1":
                continue
            lm = _LETTER_TOK.fullmatch(tok)
            if not lm:
                raise DSLError(f"bad token {tok!r}", n, col)
            name, p = lm.group(1), int(lm.group(2) or 1)
            if name not in doc.letters:
                raise DSLError(f"unknown letter {name!r}", n, col)
            if p == 0:
                raise DSLError("exponent 0 is not allowed", n, col + len(name))
            atoms.extend([SignedLetter(name, 1 if p > 0 else -1)] * abs(p))
        return atoms


def _fold(atoms: list, group: CoefficientGroup) -> list:
    """Multiply adjacent coefficients and drop identities; letters untouched."""
    out: list = []
    for a in atoms:
        if isinstance(a, Coeff):
            if out and isinstance(out[-1], Coeff):
                out[-1] = Coeff(group.mul(out[-1].value, a.value))
            else:
                out.append(a)
            if group.is_identity(out[-1].value):
                out.pop()
        else:
            out.append(a)
    return out


def _col(s: str) -> int:
    return len(s) - len(s.lstrip()) + 1


def parse(text: str, base: str | Path | None = None) -> PresentationDocument:
    """Parse a document; ``base`` resolves relative ``table`` paths."""
    return _Parser(text, Path(base) if base is not None else None).run()


def parse_file(path: str | Path) -> PresentationDocument:
    path = Path(path)
    return parse(path.read_text(encoding="utf-8"), base=path.parent)


def document_from(P: RelativePresentation, group_name: str = "H", names: tuple = ()) -> PresentationDocument:
    """Wrap a presentation as a document (relators named ``R``, ``R2``, ...)."""
    names = names or tuple("R" if i == 0 else f"R{i + 1}" for i in range(len(P.relators)))
    return PresentationDocument(
        group_name=group_name,
        group=P.group,
        letters=tuple(P.alphabet),
        relators=dict(zip(names, P.relators)),
    )

