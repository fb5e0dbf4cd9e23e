"""The controlled English fragment: tokenizer, LL(1) parser and interpreter.

Grammar::

    S   -> QP VP
    VP  -> V | Vt QP | Vdt QP QP
    QP  -> Det N | Name [N]

A name is a determiner whose lexicon target is ``name:E``.  When it stands
without a noun, its sort is the verb's column at that position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from contscope.model import VERB_ARITY, Model
from contscope.quant import Determiner, parse_determiner
from contscope.strategies import (
    GOLDEN_READINGS,
    StrategyVariant,
    SurfaceTree,
    evaluate,
    parse_variant,
    reading_label,
    variants,
)

MAX_FOLD = 3  # longest multiword determiner, in words
_PUNCT = re.compile(r"[^\w\s-]")


class FragmentError(ValueError):
    """A sentence is outside the fragment or uses an unknown word."""


@dataclass(frozen=True)
class Token:
    word: str
    category: str
    payload: str
    position: int  # 1-based index of the first surface word


@dataclass(frozen=True)
class ParseResult:
    tree: SurfaceTree
    tokens: tuple[Token, ...]
    spans: tuple[tuple[int, int], ...]  # token ranges: QP1, verb, QP2, QP3


def tokenize(text: str, lexicon: dict) -> list[Token]:
    """Lowercase, strip punctuation and fold multiword determiners."""
    words = _PUNCT.sub(" ", text.lower()).split()
    out = []
    i = 0
    while i < len(words):
        for k in range(min(MAX_FOLD, len(words) - i), 0, -1):
            word = "-".join(words[i : i + k])
            entry = lexicon.get(word)
            if entry is not None and (k == 1 or entry.category == "det"):
                out.append(Token(word, entry.category, entry.target, i + 1))
                i += k
                break
        else:
            raise FragmentError(f"unknown word {words[i]!r} at position {i + 1}")
    return out


class _Parser:
    def __init__(self, tokens: Sequence[Token], model: Model):
        self.tokens = tuple(tokens)
        self.model = model
        self.i = 0

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, categories: tuple[str, ...], what: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise FragmentError(f"unexpected end of sentence: expected {what}")
        if tok.category not in categories:
            raise FragmentError(f"expected {what} at position {tok.position}, got {tok.category} {tok.word!r}")
        self.i += 1
        return tok

    def qp(self, role: str) -> tuple[Determiner, str | None, tuple[int, int]]:
        start = self.i
        det_tok = self.take(("det",), f"{role} determiner")
        det = parse_determiner(det_tok.payload)
        noun = None
        nxt = self.peek()
        if nxt is not None and nxt.category == "noun":
            noun = self.take(("noun",), "noun").payload
        elif det.tag != "name":
            raise FragmentError(f"missing noun after determiner {det_tok.word!r}")
        return det, noun, (start, self.i)

    def sentence(self) -> ParseResult:
        if not self.tokens:
            raise FragmentError("empty sentence")
        qps = [self.qp("subject")]
        vstart = self.i
        verb_tok = self.take(tuple(VERB_ARITY), "verb")
        spans = [qps[0][2], (vstart, self.i)]
        arity = VERB_ARITY[verb_tok.category]
        for k in range(1, arity):
            if self.peek() is None:
                raise FragmentError(f"{verb_tok.category} {verb_tok.word!r} requires {arity - 1} object QP(s)")
            qps.append(self.qp("object"))
            spans.append(qps[-1][2])
        if self.peek() is not None:
            tok = self.peek()
            raise FragmentError(f"trailing tokens from position {tok.position}: {tok.word!r}")
        verb = self.model.relations[verb_tok.payload]
        resolved = []
        for k, (det, noun, _) in enumerate(qps):
            sort = self.model.sorts[noun] if noun is not None else verb.columns[k]
            if det.tag == "name" and not sort.contains(det.element):
                raise FragmentError(f"{det.element} is not a {sort.name}")
            resolved.append((det, sort))
        return ParseResult(SurfaceTree(tuple(resolved), verb), self.tokens, tuple(spans))


def parse(tokens: Sequence[Token], model: Model) -> ParseResult:
    return _Parser(tokens, model).sentence()


def parse_sentence(text: str, model: Model) -> ParseResult:
    return parse(tokenize(text, model.lexicon), model)


def unparse(result: ParseResult) -> str:
    """The normalized surface string; multiword determiners stay folded."""
    return " ".join(t.word for t in result.tokens)


@dataclass(frozen=True)
class Row:
    variant: str
    reading: str
    truth: bool


def interpret(
    sentence: str,
    model: Model,
    strategy: str,
    variant: StrategyVariant | str | None = None,
) -> list[Row]:
    """Evaluate a sentence under one variant, or under every variant of a strategy.

    The reading column is the frozen variant-to-reading table, which the
    acceptance suite re-derives against the oracle.
    """
    tree = parse_sentence(sentence, model).tree
    shape = tree.shape
    if variant is None:
        chosen = variants(strategy, shape)
    elif isinstance(variant, str):
        chosen = [parse_variant(strategy, variant, shape)]
    else:
        if variant.strategy != strategy:
            raise ValueError(f"variant {variant.label} does not belong to strategy {strategy}")
        variant.check_shape(len(tree.qps))
        chosen = [variant]
    table = GOLDEN_READINGS[strategy][shape]
    return [Row(v.label, reading_label(table[v.label]), evaluate(tree, v)) for v in chosen]


def format_rows(rows: Sequence[Row]) -> str:
    lines = ["variant\treading\ttruth"]
    lines += [f"{r.variant}\t{r.reading}\t{'true' if r.truth else 'false'}" for r in rows]
    return "\n".join(lines) + "\n"
