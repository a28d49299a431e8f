"""Parsers for the two corpus XML dialects.

Both dialects are reduced to the same in-memory sentence form so that the
downstream pipeline never needs to know which framenet an example came from.
The BFN dialect annotates phrase types and grammatical functions over
character spans; the SweFN dialect annotates part of speech, morphology and
dependency relations at the word level.
"""

from __future__ import annotations

import json
import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import IO, Iterable

logger = logging.getLogger(__name__)

# Layers whose labels are treated as the token/POS layer of a BFN sentence.
BFN_POS_LAYERS = {"BNC", "PENN"}


class CorpusParseError(ValueError):
    """The document as a whole cannot be parsed (malformed XML etc.)."""


class Dialect(str, Enum):
    BFN_PHRASE = "bfn"
    SWEFN_DEP = "swefn"


@dataclass(frozen=True)
class TokenSpan:
    """Inclusive character offsets into the sentence text."""

    start: int
    end: int


@dataclass(frozen=True)
class WordAnno:
    """One annotated token.

    For BFN tokens only ``surface``, ``pos`` and ``span`` are meaningful;
    SweFN tokens additionally carry msd, dependency head and relation.
    """

    surface: str
    pos: str
    ref: int
    msd: str | None = None
    dephead: int | None = None
    deprel: str = ""
    span: TokenSpan | None = None


@dataclass(frozen=True)
class FeSpan:
    """One frame element annotation within a sentence."""

    fe_name: str
    span: TokenSpan | None = None
    phrase_type: str | None = None
    gram_function: str | None = None
    words: tuple[WordAnno, ...] | None = None
    null_instantiated: bool = False


@dataclass(frozen=True)
class AnnotatedSentence:
    """Framenet-neutral form of one annotated corpus example."""

    sentence_id: str
    text: str
    frame: str
    target: TokenSpan
    lu_ref: str
    fe_spans: tuple[FeSpan, ...]
    dialect: Dialect
    tokens: tuple[WordAnno, ...] = ()

    def target_tokens(self) -> tuple[WordAnno, ...]:
        """Tokens whose span overlaps the target span."""
        return tuple(
            t for t in self.tokens
            if t.span is not None
            and t.span.start <= self.target.end
            and t.span.end >= self.target.start
        )


def _read_source(source: bytes | str | Path | IO[bytes]) -> bytes:
    if isinstance(source, bytes):
        return source
    if isinstance(source, str):
        return source.encode("utf-8")
    if isinstance(source, Path):
        return source.read_bytes()
    return source.read()


def _byte_offset(data: bytes, line: int, column: int) -> int:
    newline = 0
    for _ in range(line - 1):
        nxt = data.find(b"\n", newline)
        if nxt == -1:
            break
        newline = nxt + 1
    return newline + column


def _parse_xml(data: bytes) -> ET.Element:
    try:
        return ET.fromstring(data)
    except ET.ParseError as exc:
        line, col = exc.position
        offset = _byte_offset(data, line, col)
        raise CorpusParseError(
            f"malformed XML at byte {offset} (line {line}, column {col}): {exc}"
        ) from exc


# ---------------------------------------------------------------------------
# BFN dialect
# ---------------------------------------------------------------------------

def _bfn_labels(layer: ET.Element) -> list[ET.Element]:
    return layer.findall("label")


def _bfn_offsets(label: ET.Element) -> TokenSpan | None:
    start = label.get("start")
    end = label.get("end")
    if start is None or end is None:
        return None
    return TokenSpan(int(start), int(end))


class _RecordError(ValueError):
    """Sentence-level problem: the record is skipped and logged."""


def _parse_bfn_sentence(sent: ET.Element) -> list[AnnotatedSentence]:
    sid = sent.get("ID") or sent.get("id") or ""
    text_el = sent.find("text")
    if text_el is None or text_el.text is None:
        raise _RecordError(f"sentence {sid!r} has no text element")
    text = text_el.text

    tokens: list[WordAnno] = []
    for aset in sent.findall("annotationSet"):
        for layer in aset.findall("layer"):
            if layer.get("name") in BFN_POS_LAYERS:
                for label in _bfn_labels(layer):
                    span = _bfn_offsets(label)
                    if span is None:
                        continue
                    tokens.append(WordAnno(
                        surface=text[span.start:span.end + 1],
                        pos=label.get("name", ""),
                        ref=len(tokens) + 1,
                        span=span,
                    ))
    tokens.sort(key=lambda t: t.span.start)  # type: ignore[union-attr]

    out: list[AnnotatedSentence] = []
    for aset in sent.findall("annotationSet"):
        layers = {layer.get("name"): layer for layer in aset.findall("layer")}
        target_layer = layers.get("Target")
        if target_layer is None or not _bfn_labels(target_layer):
            continue
        frame = aset.get("frameName")
        if not frame:
            raise _RecordError(f"sentence {sid!r}: target annotation set lacks a frame name")

        target_spans = [s for s in map(_bfn_offsets, _bfn_labels(target_layer)) if s]
        target = TokenSpan(min(s.start for s in target_spans), max(s.end for s in target_spans))

        lu_name = aset.get("luName")
        lu_id = aset.get("luID")
        if lu_name and lu_id:
            lu_ref = f"{lu_name}.{lu_id}"
        elif lu_name:
            lu_ref = lu_name
        else:
            lu_ref = f"{text[target.start:target.end + 1].lower()}.{frame}"

        def by_offsets(name: str) -> dict[tuple[int, int], str]:
            layer = layers.get(name)
            if layer is None:
                return {}
            table: dict[tuple[int, int], str] = {}
            for label in _bfn_labels(layer):
                span = _bfn_offsets(label)
                if span is not None:
                    table[(span.start, span.end)] = label.get("name", "")
            return table

        gf_by_span = by_offsets("GF")
        pt_by_span = by_offsets("PT")

        fe_layer = layers.get("FE")
        fe_spans: list[FeSpan] = []
        for label in _bfn_labels(fe_layer) if fe_layer is not None else []:
            fe_name = label.get("name", "")
            span = _bfn_offsets(label)
            if span is None:
                fe_spans.append(FeSpan(fe_name=fe_name, null_instantiated=True))
                continue
            if not (0 <= span.start <= span.end < len(text)):
                raise _RecordError(
                    f"sentence {sid!r}: FE {fe_name!r} offsets {span.start}..{span.end} "
                    f"overlap no text (length {len(text)})"
                )
            pt = pt_by_span.get((span.start, span.end))
            gf = gf_by_span.get((span.start, span.end))
            if pt is None:
                # No phrase type at these offsets: the FE is annotated but not
                # grammatically realized, which is how omitted FEs surface here.
                fe_spans.append(FeSpan(fe_name=fe_name, span=span, null_instantiated=True))
            else:
                fe_spans.append(FeSpan(
                    fe_name=fe_name, span=span, phrase_type=pt, gram_function=gf or "",
                ))
        fe_spans.sort(key=lambda f: (f.span.start, f.span.end) if f.span else (-1, -1))

        out.append(AnnotatedSentence(
            sentence_id=sid,
            text=text,
            frame=frame,
            target=target,
            lu_ref=lu_ref,
            fe_spans=tuple(fe_spans),
            dialect=Dialect.BFN_PHRASE,
            tokens=tuple(tokens),
        ))
    return out


def parse_bfn_corpus(source: bytes | str | Path | IO[bytes]) -> list[AnnotatedSentence]:
    """Parse a BFN-style corpus document.

    Produces one sentence record per target-bearing annotation set. Sentences
    with inconsistent annotations (FE offsets outside the text, missing frame
    name) are skipped and logged rather than aborting the run.
    """
    root = _parse_xml(_read_source(source))
    out: list[AnnotatedSentence] = []
    for sent in root.iter("sentence"):
        try:
            out.extend(_parse_bfn_sentence(sent))
        except _RecordError as exc:
            logger.warning("skipping BFN record: %s", exc)
    return out


# ---------------------------------------------------------------------------
# SweFN dialect
# ---------------------------------------------------------------------------

def _swefn_word(el: ET.Element, ref_fallback: int, offset: int) -> WordAnno:
    surface = (el.text or "").strip()
    msd = el.get("msd")
    pos = el.get("pos") or (msd.split(".")[0] if msd else "")
    ref = int(el.get("ref", ref_fallback))
    dephead_attr = el.get("dephead")
    dephead = int(dephead_attr) if dephead_attr else None
    return WordAnno(
        surface=surface,
        pos=pos,
        ref=ref,
        msd=msd,
        dephead=dephead,
        deprel=el.get("deprel", ""),
        span=TokenSpan(offset, offset + len(surface) - 1),
    )


def _parse_swefn_sentence(sent: ET.Element) -> AnnotatedSentence:
    sid = sent.get("id") or sent.get("ID") or ""
    frame = sent.get("frame")
    if not frame:
        raise _RecordError(f"sentence {sid!r} lacks a frame attribute")

    tokens: list[WordAnno] = []
    elements: list[tuple[str, list[WordAnno]]] = []
    offset = 0

    def add_word(el: ET.Element) -> WordAnno:
        nonlocal offset
        word = _swefn_word(el, ref_fallback=len(tokens) + 1, offset=offset)
        offset = word.span.end + 2  # type: ignore[union-attr]
        tokens.append(word)
        return word

    for child in sent:
        if child.tag == "w":
            add_word(child)
        elif child.tag == "element":
            name = child.get("name", "")
            words = [add_word(w) for w in child.findall("w")]
            elements.append((name, words))

    text = " ".join(t.surface for t in tokens)

    lu_words = [w for name, words in elements if name == "LU" for w in words]
    if not lu_words:
        raise _RecordError(f"sentence {sid!r} has no LU element")
    target = TokenSpan(
        min(w.span.start for w in lu_words),  # type: ignore[union-attr]
        max(w.span.end for w in lu_words),  # type: ignore[union-attr]
    )
    lu_ref = sent.get("lu") or f"{lu_words[0].surface.lower()}.{frame}"

    fe_spans = tuple(
        FeSpan(
            fe_name=name,
            span=TokenSpan(words[0].span.start, words[-1].span.end),  # type: ignore[union-attr]
            words=tuple(words),
        )
        for name, words in elements
        if name != "LU" and words
    )

    return AnnotatedSentence(
        sentence_id=sid,
        text=text,
        frame=frame,
        target=target,
        lu_ref=lu_ref,
        fe_spans=fe_spans,
        dialect=Dialect.SWEFN_DEP,
        tokens=tuple(tokens),
    )


def parse_swefn_corpus(source: bytes | str | Path | IO[bytes]) -> list[AnnotatedSentence]:
    """Parse a SweFN-style corpus document (one record per sentence element)."""
    root = _parse_xml(_read_source(source))
    out: list[AnnotatedSentence] = []
    for sent in root.iter("sentence"):
        try:
            out.append(_parse_swefn_sentence(sent))
        except _RecordError as exc:
            logger.warning("skipping SweFN record: %s", exc)
    return out


def parse_corpus(source: bytes | str | Path | IO[bytes], dialect: Dialect) -> list[AnnotatedSentence]:
    if dialect is Dialect.BFN_PHRASE:
        return parse_bfn_corpus(source)
    return parse_swefn_corpus(source)


# ---------------------------------------------------------------------------
# JSON-lines serialization
# ---------------------------------------------------------------------------

def _span_dict(span: TokenSpan | None) -> dict | None:
    return None if span is None else {"start": span.start, "end": span.end}


def _word_dict(word: WordAnno) -> dict:
    return {
        "surface": word.surface,
        "pos": word.pos,
        "ref": word.ref,
        "msd": word.msd,
        "dephead": word.dephead,
        "deprel": word.deprel,
        "span": _span_dict(word.span),
    }


def sentence_to_dict(s: AnnotatedSentence) -> dict:
    return {
        "sentence_id": s.sentence_id,
        "text": s.text,
        "frame": s.frame,
        "target": _span_dict(s.target),
        "lu_ref": s.lu_ref,
        "fe_spans": [
            {
                "fe_name": fe.fe_name,
                "span": _span_dict(fe.span),
                "phrase_type": fe.phrase_type,
                "gram_function": fe.gram_function,
                "words": None if fe.words is None else [_word_dict(w) for w in fe.words],
                "null_instantiated": fe.null_instantiated,
            }
            for fe in s.fe_spans
        ],
        "dialect": s.dialect.value,
        "tokens": [_word_dict(t) for t in s.tokens],
    }


def _span_from(d: dict | None) -> TokenSpan | None:
    return None if d is None else TokenSpan(d["start"], d["end"])


def _word_from(d: dict) -> WordAnno:
    return WordAnno(
        surface=d["surface"],
        pos=d["pos"],
        ref=d["ref"],
        msd=d.get("msd"),
        dephead=d.get("dephead"),
        deprel=d.get("deprel", ""),
        span=_span_from(d.get("span")),
    )


def sentence_from_dict(d: dict) -> AnnotatedSentence:
    return AnnotatedSentence(
        sentence_id=d["sentence_id"],
        text=d["text"],
        frame=d["frame"],
        target=_span_from(d["target"]),  # type: ignore[arg-type]
        lu_ref=d["lu_ref"],
        fe_spans=tuple(
            FeSpan(
                fe_name=fe["fe_name"],
                span=_span_from(fe.get("span")),
                phrase_type=fe.get("phrase_type"),
                gram_function=fe.get("gram_function"),
                words=None if fe.get("words") is None else tuple(_word_from(w) for w in fe["words"]),
                null_instantiated=fe.get("null_instantiated", False),
            )
            for fe in d["fe_spans"]
        ),
        dialect=Dialect(d["dialect"]),
        tokens=tuple(_word_from(t) for t in d.get("tokens", [])),
    )


def write_sentences_jsonl(sentences: Iterable[AnnotatedSentence], path: Path) -> None:
    with path.open("w", encoding="utf-8") as f:
        for s in sentences:
            f.write(json.dumps(sentence_to_dict(s), ensure_ascii=False, sort_keys=True))
            f.write("\n")


def read_sentences_jsonl(path: Path) -> list[AnnotatedSentence]:
    with path.open("r", encoding="utf-8") as f:
        return [sentence_from_dict(json.loads(line)) for line in f if line.strip()]
