"""Element literals, one format per context kind."""

from __future__ import annotations

from pdim_lab.core.errors import UsageError
from pdim_lab.core.groups import (
    CanopyTree,
    EdgeListGraph,
    Element,
    FreeGroup,
    GroupContext,
    HeisenbergGroup,
    LamplighterGroup,
    LatticeGroup,
    ProductGroup,
)


def _ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",")) if text else ()
    except ValueError:
        raise UsageError(f"invalid {what} literal: {text!r}") from None


def _free_word(ctx: FreeGroup, text: str) -> Element:
    if text in ("", ctx.identity_literal, "1"):
        return ()
    word: Element = ()
    for ch in text:
        index = ctx._LETTERS.find(ch.lower()) + 1
        if index == 0 or index > ctx.k:
            raise UsageError(f"letter {ch!r} is not a generator of {ctx.spec}")
        # multiplying letter by letter leaves the word freely reduced
        word = ctx.mul(word, (index if ch.islower() else -index,))
    return word


def parse_element(ctx: GroupContext, text: str) -> Element:
    """Parse an element literal of ``ctx``.

    Formats: lattice ``1,-2``; free group ``abA`` (capitals are inverses, ``e``
    the identity); Heisenberg ``a,b,c``; lamplighter ``0,2@1``; product
    ``left|right``; canopy ``i.j.k``; edge-list graphs the vertex label.

    Raises:
        UsageError: If the literal is malformed or names no element of ``ctx``.
    """
    text = text.strip()
    element: Element
    if isinstance(ctx, LatticeGroup):
        element = _ints(text, "lattice")
    elif isinstance(ctx, FreeGroup):
        element = _free_word(ctx, text)
    elif isinstance(ctx, HeisenbergGroup):
        element = _ints(text, "Heisenberg")
    elif isinstance(ctx, LamplighterGroup):
        lamps_text, sep, head_text = text.partition("@")
        if not sep:
            raise UsageError(f"lamplighter literal needs '<lamps>@<head>': {text!r}")
        lamps = _ints(lamps_text, "lamp")
        if len(set(lamps)) != len(lamps):
            raise UsageError(f"lamp positions repeat in {text!r}")
        element = (tuple(sorted(lamps)), _ints(head_text, "head")[0] if head_text else 0)
    elif isinstance(ctx, ProductGroup):
        left, sep, right = text.partition("|")
        if not sep:
            raise UsageError(f"product literal needs '<left>|<right>': {text!r}")
        element = (parse_element(ctx.left, left), parse_element(ctx.right, right))
    elif isinstance(ctx, CanopyTree):
        parts = text.split(".")
        if len(parts) != 3:
            raise UsageError(f"canopy literal needs 'i.j.k': {text!r}")
        element = _ints(",".join(parts), "canopy")
    elif isinstance(ctx, EdgeListGraph):
        element = ctx.vertex(text)
    else:
        raise UsageError(f"no literal format for {ctx.spec}")
    if not ctx.contains(element):
        raise UsageError(f"{text!r} is not an element of {ctx.spec}")
    return element
