"""The text form of terms.

Whitespace separates factors and is otherwise ignored:

    -                 the empty word
    $x                a variable
    abc               a run of letters, read as a well-matched word
    [u,v](t)          ext_{u,v}(t); u and v are words, `-` for empty
    [u,v]*(t)         the ω-power of ext_{u,v}, applied to t
    (t)               grouping

Juxtaposed factors are concatenated.
"""

from typing import Any

import ply.lex as lex
import ply.yacc as yacc

from extalgebra.core import (
    EMPTY_WORD_TOKEN,
    Context,
    PushdownAlphabet,
    format_word,
    parse_word,
)
from extalgebra.errors import ExtAlgebraError, NotWellMatched, ParseError
from extalgebra.profinite.terms import (
    Concat,
    EmptyWord,
    Ext,
    ExtOmega,
    Letter,
    Term,
    Var,
    concat_all,
    word_to_term,
)
from extalgebra.types import Word

tokens = ["VAR", "WORD"]

literals = ["(", ")", "[", "]", ",", "*", "-"]

t_ignore = " \t\r\n"


def t_VAR(t):
    r"\$[A-Za-z_][A-Za-z0-9_]*"
    t.value = t.value[1:]
    return t


def t_WORD(t):
    r"[^\s,=\#\-|:()\[\];$*]+"
    return t


def _fail(position: int, message: str) -> ParseError:
    return ParseError(1, f"column {position + 1}: {message}")


def t_error(t):
    raise _fail(t.lexpos, f"unexpected {t.value[0]!r}")


def _word(p: Any, n: int) -> Word:
    try:
        return parse_word(p.lexer.alphabet, p[n])
    except ExtAlgebraError as error:
        raise _fail(p.lexpos(n), str(error)) from error


start = "term"


def p_term(p):
    """term : factors"""
    p[0] = concat_all(p[1])


def p_factors_first(p):
    """factors : factor"""
    p[0] = [p[1]]


def p_factors_more(p):
    """factors : factors factor"""
    p[0] = p[1] + [p[2]]


def p_factor_variable(p):
    """factor : VAR"""
    p[0] = Var(p[1])


def p_factor_empty(p):
    """factor : '-'"""
    p[0] = EmptyWord()


def p_factor_word(p):
    """factor : WORD"""
    try:
        p[0] = word_to_term(p.lexer.alphabet, _word(p, 1))
    except NotWellMatched as error:
        raise _fail(p.lexpos(1), f"{p[1]!r} is not well-matched") from error


def p_factor_group(p):
    """factor : '(' term ')'"""
    p[0] = p[2]


def p_factor_ext(p):
    """factor : '[' side ',' side ']' '(' term ')'
    | '[' side ',' side ']' '*' '(' term ')'"""
    left: Word = p[2]
    right: Word = p[4]
    try:
        context = Context(p.lexer.alphabet, left, right)
    except NotWellMatched as error:
        raise _fail(
            p.lexpos(1),
            f"[{format_word(left)},{format_word(right)}] is not a context",
        ) from error
    if len(p) == 9:
        p[0] = Ext(context, p[7])
    else:
        p[0] = ExtOmega(context, p[8])


def p_side_word(p):
    """side : WORD"""
    p[0] = _word(p, 1)


def p_side_empty(p):
    """side : '-'
    | empty"""
    p[0] = ""


def p_empty(p):
    """empty :"""


def p_error(t):
    if t is None:
        raise ParseError(1, "unexpected end of term")
    raise _fail(t.lexpos, f"unexpected {t.value!r}")


_LEXER = lex.lex(errorlog=lex.NullLogger())
_PARSER = yacc.yacc(
    debug=False,
    write_tables=False,
    tabmodule="extalgebra_term_tables",
    errorlog=yacc.NullLogger(),
)


def parse_term(alphabet: PushdownAlphabet, text: str) -> Term:
    """Reads a term in the syntax described in this module's docstring.

    :raises ParseError: with the column of the offending token.
    """
    lexer = _LEXER.clone()
    lexer.alphabet = alphabet
    return _PARSER.parse(text, lexer=lexer)


def render_term(t: Term) -> str:
    """The text form of a term, readable back by parse_term."""
    if isinstance(t, Var):
        return f"${t.name}"
    if isinstance(t, EmptyWord):
        return EMPTY_WORD_TOKEN
    if isinstance(t, Letter):
        return t.letter
    if isinstance(t, Concat):
        return f"{render_term(t.left)} {render_term(t.right)}"
    star = "*" if isinstance(t, ExtOmega) else ""
    return (
        f"[{format_word(t.context.left)},{format_word(t.context.right)}]"
        f"{star}({render_term(t.body)})"
    )