"""Concrete formula syntax.

Grammar, lowest precedence first:

    formula   := 'all' VAR '.' formula
               | 'ex' VAR '.' formula
               | implied
    implied   := disjunct ['->' formula]          sugar for !a | b
    disjunct  := conjunct ('|' conjunct)*
    conjunct  := negation ('&' negation)*
    negation  := '!' negation | primary
    primary   := '(' formula ')'
               | 'all' ... | 'ex' ...             body extends maximally
               | 'lfp' SVAR ',' VAR '.' formula '@' VAR
               | 'C' VAR '(' formula ')' cmp INT
               | NAME '#' INT '(' VAR ',' VAR ')'  bounded-coalition edge E#k
               | NAME '(' VAR {',' VAR} ')'        graph atom or set variable
               | VAR '=' VAR
    cmp       := '<' | '<=' | '=' | '>=' | '>'

`all`, `ex`, `lfp` and `C` are reserved words.  A name applied to one
argument is a set-variable test when the name is bound by an enclosing
lfp (or listed in so_vars), otherwise a graph atom.

Formula files hold one definition per line, `name(params) := body`, with
`#` starting a comment only at the start of a line or after whitespace so
that `E#2` stays an atom.  Earlier definitions are usable later as macros;
expansion is textual at the token level, checked for cycles.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import formulas as F
from .errors import FormulaSyntaxError, MacroError, WellFormednessError

KEYWORDS = ("all", "ex", "lfp", "C")

_SYMBOLS = ("->", ":=", "<=", ">=", "(", ")", ",", ".", "@", "#",
            "!", "&", "|", "<", ">", "=")


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # 'ident' | 'int' | 'sym' | 'end'
    value: str
    line: int
    col: int


def tokenize(text):
    """Token list for a formula or definition body, comments stripped."""
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#" and (i == 0 or text[i - 1] in " \t\r\n"):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("sym", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise FormulaSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens, so_vars):
        self.tokens = tokens
        self.pos = 0
        self.so_scope = list(so_vars)

    def peek(self, offset=0):
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            raise FormulaSyntaxError(
                f"expected {want!r}, found {tok.value or 'end of input'!r}",
                tok.line, tok.col)
        return self.next()

    def at_sym(self, value):
        tok = self.peek()
        return tok.kind == "sym" and tok.value == value

    def parse_formula(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.value in ("all", "ex"):
            return self.parse_quantifier()
        return self.parse_implied()

    def parse_quantifier(self):
        tok = self.next()
        var = self.parse_var()
        self.expect("sym", ".")
        body = self.parse_formula()
        return (F.Forall if tok.value == "all" else F.Exists)(var, body)

    def parse_implied(self):
        left = self.parse_disjunct()
        if self.at_sym("->"):
            self.next()
            right = self.parse_formula()
            return F.Or(F.Not(left), right)
        return left

    def parse_disjunct(self):
        node = self.parse_conjunct()
        while self.at_sym("|"):
            self.next()
            node = F.Or(node, self.parse_conjunct())
        return node

    def parse_conjunct(self):
        node = self.parse_negation()
        while self.at_sym("&"):
            self.next()
            node = F.And(node, self.parse_negation())
        return node

    def parse_negation(self):
        if self.at_sym("!"):
            self.next()
            return F.Not(self.parse_negation())
        return self.parse_primary()

    def parse_primary(self):
        tok = self.peek()
        if self.at_sym("("):
            self.next()
            node = self.parse_formula()
            self.expect("sym", ")")
            return node
        if tok.kind != "ident":
            raise FormulaSyntaxError(
                f"expected a formula, found {tok.value or 'end of input'!r}",
                tok.line, tok.col)
        if tok.value in ("all", "ex"):
            return self.parse_quantifier()
        if tok.value == "lfp":
            return self.parse_lfp()
        if tok.value == "C":
            return self.parse_count()
        return self.parse_atomlike()

    def parse_lfp(self):
        self.expect("ident", "lfp")
        svar = self.parse_name("set variable")
        self.expect("sym", ",")
        var = self.parse_var()
        self.expect("sym", ".")
        self.so_scope.append(svar)
        try:
            body = self.parse_formula()
        finally:
            self.so_scope.pop()
        self.expect("sym", "@")
        applied = self.parse_var()
        return F.Lfp(svar, var, body, applied)

    def parse_count(self):
        self.expect("ident", "C")
        var = self.parse_var()
        self.expect("sym", "(")
        body = self.parse_formula()
        self.expect("sym", ")")
        cmp_tok = self.peek()
        if cmp_tok.kind != "sym" or cmp_tok.value not in F.COMPARATORS:
            raise FormulaSyntaxError(
                f"expected a comparator, found {cmp_tok.value!r}",
                cmp_tok.line, cmp_tok.col)
        self.next()
        bound = self.expect("int")
        return F.Count(var, body, cmp_tok.value, int(bound.value))

    def parse_atomlike(self):
        name_tok = self.next()
        name = name_tok.value
        if self.at_sym("#"):
            self.next()
            k = self.expect("int")
            name = f"{name}#{k.value}"
        if self.at_sym("("):
            self.next()
            args = [self.parse_var()]
            while self.at_sym(","):
                self.next()
                args.append(self.parse_var())
            self.expect("sym", ")")
            if name in self.so_scope:
                if len(args) != 1:
                    raise WellFormednessError(
                        "so-arity",
                        f"set variable {name!r} takes one argument, "
                        f"got {len(args)}")
                return F.SoAtom(name, args[0])
            return F.Atom(name, tuple(args))
        if self.at_sym("="):
            self.next()
            right = self.parse_var()
            return F.Eq(name, right)
        tok = self.peek()
        raise FormulaSyntaxError(
            f"expected '(' or '=' after {name!r}", tok.line, tok.col)

    def parse_var(self):
        return self.parse_name("variable")

    def parse_name(self, what):
        tok = self.peek()
        if tok.kind != "ident" or tok.value in KEYWORDS:
            raise FormulaSyntaxError(
                f"expected a {what} name, found {tok.value or 'end of input'!r}",
                tok.line, tok.col)
        return self.next().value


def parse(text, *, so_vars=(), macros=None, validate=True):
    """Parse one formula.

    so_vars lists names to treat as free set variables; used for testing
    evaluation under explicit set assignments.  macros maps names to
    definitions from parse_definitions.  Well-formedness side conditions
    are checked unless validate is False.
    """
    tokens = tokenize(text)
    if macros:
        end = tokens[-1]
        tokens = _expand_tokens(tokens[:-1], macros, ()) + [end]
    parser = _Parser(tokens, so_vars)
    node = parser.parse_formula()
    end = parser.peek()
    if end.kind != "end":
        raise FormulaSyntaxError(
            f"unexpected {end.value!r} after formula", end.line, end.col)
    if validate:
        F.validate(node)
    return node


# -- pretty printing ------------------------------------------------------

_LEVEL_OR = 1
_LEVEL_AND = 2
_LEVEL_NOT = 3
_LEVEL_ATOM = 4


def pretty(f):
    """Concrete syntax for a formula; parse(pretty(f)) == f."""
    return _pp(f, 0)


def _pp(f, minlevel):
    if isinstance(f, F.Atom):
        return f"{f.name}({', '.join(f.args)})"
    if isinstance(f, F.SoAtom):
        return f"{f.svar}({f.arg})"
    if isinstance(f, F.Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, F.Count):
        return f"C {f.var} ({_pp(f.sub, 0)}) {f.cmp} {f.bound}"
    if isinstance(f, F.Not):
        return "!" + _pp(f.sub, _LEVEL_NOT)
    if isinstance(f, F.And):
        text = f"{_pp(f.left, _LEVEL_AND)} & {_pp(f.right, _LEVEL_AND + 1)}"
        return _wrap(text, _LEVEL_AND, minlevel)
    if isinstance(f, F.Or):
        text = f"{_pp(f.left, _LEVEL_OR)} | {_pp(f.right, _LEVEL_OR + 1)}"
        return _wrap(text, _LEVEL_OR, minlevel)
    if isinstance(f, (F.Exists, F.Forall)):
        word = "all" if isinstance(f, F.Forall) else "ex"
        text = f"{word} {f.var}. {_pp(f.sub, 0)}"
        return _wrap(text, 0, minlevel)
    if isinstance(f, F.Lfp):
        text = (f"lfp {f.svar},{f.var}. ({_pp(f.body, 0)}) "
                f"@ {f.applied_to}")
        return _wrap(text, 0, minlevel)
    raise FormulaSyntaxError(f"not a formula node: {f!r}")


def _wrap(text, level, minlevel):
    return f"({text})" if level < minlevel else text


# -- formula files and macros ---------------------------------------------

@dataclass(frozen=True, slots=True)
class MacroDef:
    name: str
    params: tuple
    tokens: tuple  # fully expanded body tokens, end token stripped


def _expand_tokens(tokens, macros, stack):
    """Expand macro uses in an end-free token list, returning a new list."""
    out = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.kind == "ident" and tok.value in macros:
            name = tok.value
            if name in stack:
                chain = " -> ".join(stack + (name,))
                raise MacroError(f"macro cycle: {chain}")
            macro = macros[name]
            i += 1
            args = []
            if i < len(tokens) and tokens[i].kind == "sym" \
                    and tokens[i].value == "(":
                i += 1
                while True:
                    if i >= len(tokens) or tokens[i].kind != "ident":
                        raise MacroError(
                            f"macro {name!r}: arguments must be variable names")
                    args.append(tokens[i].value)
                    i += 1
                    if i < len(tokens) and tokens[i].kind == "sym" \
                            and tokens[i].value == ",":
                        i += 1
                        continue
                    break
                if i >= len(tokens) or tokens[i].kind != "sym" \
                        or tokens[i].value != ")":
                    raise MacroError(f"macro {name!r}: unclosed argument list")
                i += 1
            if len(args) != len(macro.params):
                raise MacroError(
                    f"macro {name!r} takes {len(macro.params)} arguments, "
                    f"got {len(args)}")
            subst = dict(zip(macro.params, args))
            body = [Token(t.kind, subst.get(t.value, t.value), t.line, t.col)
                    if t.kind == "ident" else t for t in macro.tokens]
            # parenthesize so the body keeps its own parse shape
            out.append(Token("sym", "(", tok.line, tok.col))
            out.extend(_expand_tokens(body, macros, stack + (name,)))
            out.append(Token("sym", ")", tok.line, tok.col))
        else:
            out.append(tok)
            i += 1
    return out


def parse_definitions(text, *, validate=True):
    """Parse a formula file into an ordered dict name -> (params, formula).

    Each nonblank line is `name(params) := body` or `name := body`.  A
    definition may use earlier names as macros; expansion is textual, so an
    argument variable colliding with a bound variable of the body is
    captured, exactly as written.
    """
    results = {}
    macros = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = tokenize(raw)
        if tokens[0].kind == "end":
            continue
        tokens = [Token(t.kind, t.value, lineno, t.col) for t in tokens]
        if tokens[0].kind != "ident" or tokens[0].value in KEYWORDS:
            raise MacroError(
                f"line {lineno}: definitions start with a name")
        name = tokens[0].value
        if name in macros:
            raise MacroError(f"line {lineno}: {name!r} is already defined")
        idx = 1
        params = []
        if tokens[idx].kind == "sym" and tokens[idx].value == "(":
            idx += 1
            while tokens[idx].kind == "ident":
                params.append(tokens[idx].value)
                idx += 1
                if tokens[idx].kind == "sym" and tokens[idx].value == ",":
                    idx += 1
            if tokens[idx].kind != "sym" or tokens[idx].value != ")":
                raise MacroError(
                    f"line {lineno}: unclosed parameter list for {name!r}")
            idx += 1
        if tokens[idx].kind != "sym" or tokens[idx].value != ":=":
            raise MacroError(f"line {lineno}: expected ':=' in definition")
        body = tokens[idx + 1:-1]
        if not body:
            raise MacroError(f"line {lineno}: empty body for {name!r}")
        if len(set(params)) != len(params):
            raise MacroError(f"line {lineno}: duplicate parameter for {name!r}")

        macros[name] = MacroDef(name, tuple(params), tuple(body))
        expanded = _expand_tokens(body, macros, (name,))
        macros[name] = MacroDef(name, tuple(params), tuple(expanded))

        end = tokens[-1]
        parser = _Parser(expanded + [end], ())
        node = parser.parse_formula()
        trailing = parser.peek()
        if trailing.kind != "end":
            raise FormulaSyntaxError(
                f"unexpected {trailing.value!r} after formula",
                trailing.line, trailing.col)
        if validate:
            F.validate(node)
        results[name] = (tuple(params), node)
    return results


def load_formula_file(path, *, validate=True):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_definitions(fh.read(), validate=validate)


def macros_from_definitions(defs):
    """MacroDef table usable with parse(), from parse_definitions output."""
    table = {}
    for name, (params, formula) in defs.items():
        body = tokenize(pretty(formula))[:-1]
        table[name] = MacroDef(name, params, tuple(body))
    return table
