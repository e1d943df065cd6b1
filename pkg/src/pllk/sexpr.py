"""Minimal s-expression reader and writer.

Forms are either atoms (plain strings, no quoting) or nested lists.  The
reader tracks byte offsets so syntax errors can point at the offending spot.
"""

from __future__ import annotations


class SexprError(Exception):
    """Malformed s-expression input, with the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.message = message
        self.offset = offset


_DELIMS = set(" \t\r\n();")


def tokenize(text):
    """Yield (token, offset) pairs; tokens are '(', ')' or atom strings."""
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, i
            i += 1
        else:
            start = i
            while i < n and text[i] not in _DELIMS:
                i += 1
            yield text[start:i], start


def parse_all(text):
    """Parse every top-level form in ``text``; returns a list of forms.

    A form is an atom string or a list of forms.
    """
    stack = [[]]
    opens = []
    for tok, off in tokenize(text):
        if tok == "(":
            stack.append([])
            opens.append(off)
        elif tok == ")":
            if len(stack) == 1:
                raise SexprError("unbalanced ')'", off)
            done = stack.pop()
            opens.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        where = opens[-1] if opens else 0
        raise SexprError(f"unexpected end of input: '(' at byte {where} is "
                         "unclosed", len(text))
    return stack[0]


def parse_one(text):
    forms = parse_all(text)
    if not forms:
        raise SexprError("empty input", 0)
    if len(forms) > 1:
        raise SexprError("trailing content after first form", 0)
    return forms[0]


def write(form):
    if isinstance(form, str):
        return form
    return "(" + " ".join(write(f) for f in form) + ")"
