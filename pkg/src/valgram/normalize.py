"""Conversion of annotated sentences into uniform sentence patterns.

Each corpus example becomes one line in a shared intermediate format: frame,
grammatical voice, and the expressed frame elements in word order, typed by
the interlingual inventory NP / Adv / VP. Framenet-specific grammatical tags
never leak past this module; what cannot be mapped is skipped with a reason.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .frames import Coreness, FrameIndex
from .ingest import AnnotatedSentence, Dialect, FeSpan, WordAnno

logger = logging.getLogger(__name__)


class RglType(str, Enum):
    NP = "NP"
    ADV = "Adv"
    VP = "VP"


class SynFunction(str, Enum):
    SUBJ = "Subj"
    OBJ = "Obj"
    NONE = "None"


class Voice(str, Enum):
    ACT = "Act"
    PASS = "Pass"


class SkipReason(str, Enum):
    UNCONSIDERED_PHRASE_TYPE = "UnconsideredPhraseType"
    SUBCLAUSE = "Subclause"
    MIXED_REPEATED_FE_TYPES = "MixedRepeatedFeTypes"
    NO_GRAMMATICAL_ANNOTATION = "NoGrammaticalAnnotation"
    UNKNOWN_FRAME = "UnknownFrame"


@dataclass(frozen=True)
class Skip:
    sentence_id: str
    reason: SkipReason
    detail: str = ""


@dataclass(frozen=True)
class Generalized:
    """Result of mapping one FE annotation onto the interlingual inventory."""

    rgl_type: RglType
    syn_function: SynFunction = SynFunction.NONE
    preposition: str | None = None


@dataclass(frozen=True)
class FeRealization:
    """One expressed FE of a sentence pattern.

    ``native_type`` keeps the corpus-specific tag combination (e.g. ``NP.Ext``
    or ``VB.INF.VG``) so that baseline statistics can be computed without
    generalization; ``rgl_type`` is None when the annotation falls outside the
    considered inventory, with ``skip_reason`` saying why.
    """

    fe_name: str
    native_type: str
    rgl_type: RglType | None
    syn_function: SynFunction = SynFunction.NONE
    preposition: str | None = None
    coreness: Coreness = Coreness.CORE
    skip_reason: SkipReason | None = None

    # The cached values live in the instance __dict__ and are excluded from
    # equality and hashing, which stay field-based.

    @cached_property
    def _rgl_token(self) -> str:
        if self.rgl_type is None:
            raise ValueError(f"FE {self.fe_name!r} has no interlingual type")
        opt = "Opt_" if self.coreness is Coreness.NONCORE else ""
        token = f"{opt}{self.fe_name}_{self.rgl_type.value}"
        if self.syn_function is not SynFunction.NONE:
            token += f".{self.syn_function.value}"
        if self.preposition:
            token += f"[{self.preposition}]"
        return token

    @cached_property
    def _native_token(self) -> str:
        opt = "Opt_" if self.coreness is Coreness.NONCORE else ""
        return f"{opt}{self.fe_name}_{self.native_type}"

    @cached_property
    def rgl_key(self) -> tuple[str, str, str, bool]:
        if self.rgl_type is None:
            raise ValueError(f"FE {self.fe_name!r} has no interlingual type")
        syn = self.syn_function.value if self.syn_function is not SynFunction.NONE else ""
        return (self.fe_name, self.rgl_type.value, syn, self.coreness is Coreness.NONCORE)

    @cached_property
    def native_key(self) -> tuple[str, str, str, bool]:
        syn = self.syn_function.value if self.syn_function is not SynFunction.NONE else ""
        return (self.fe_name, self.native_type, syn, self.coreness is Coreness.NONCORE)

    def rgl_token(self) -> str:
        return self._rgl_token

    def native_token(self) -> str:
        return self._native_token


@dataclass(frozen=True)
class SentencePattern:
    frame: str
    voice: Voice
    realizations: tuple[FeRealization, ...]
    lu_ref: str
    sentence_id: str

    def has_unconsidered(self) -> bool:
        return any(r.rgl_type is None for r in self.realizations)

    @cached_property
    def rgl_fes(self) -> str:
        """FE tokens in word order, interlingual types."""
        return " ".join(r.rgl_token() for r in self.realizations)

    @cached_property
    def native_fes(self) -> str:
        """FE tokens in word order, corpus-native types."""
        return " ".join(r.native_token() for r in self.realizations)

    @cached_property
    def rgl_fe_set(self) -> tuple[tuple[str, str, str, bool], ...]:
        """Sorted, deduplicated FE keys at interlingual granularity."""
        return tuple(sorted({r.rgl_key for r in self.realizations}))

    @cached_property
    def native_fe_set(self) -> tuple[tuple[str, str, str, bool], ...]:
        return tuple(sorted({r.native_key for r in self.realizations}))

    def rgl_line(self) -> str:
        return f"{self.frame}\t{self.voice.value}\t{self.rgl_fes}\t{self.lu_ref}\t{self.sentence_id}"

    def native_line(self) -> str:
        return f"{self.frame}\t{self.voice.value}\t{self.native_fes}\t{self.lu_ref}\t{self.sentence_id}"


# ---------------------------------------------------------------------------
# Voice rules
# ---------------------------------------------------------------------------

# The corpora do not annotate voice directly, so detection is heuristic and
# deliberately configurable: users can tighten the tables per corpus.
DEFAULT_VOICE_RULES: dict = {
    "bfn": {
        # Target POS tags that can head a passive (past participle family).
        "passive_target_tags": ["VVN", "VBN", "VDN", "VHN"],
        # Auxiliary word forms looked up in the tokens preceding the target.
        "aux_forms": [
            "be", "am", "is", "are", "was", "were", "been", "being",
            "get", "gets", "got", "gotten", "getting",
        ],
        "aux_window": 3,
        # An external argument realized as this preposition's PP also signals
        # a passive (agentive by-phrase).
        "agent_preposition": "by",
        # Token POS tags counted as prepositions when recovering the
        # preposition of a PP-typed FE from the text.
        "preposition_pos": ["PRP", "PRF"],
    },
    "swefn": {
        # Morphological s-passive markers on the target itself.
        "passive_msd_markers": ["SFO"],
        # Periphrastic passives: an auxiliary verb-group link to a participle.
        "vg_aux_forms": ["bli", "blir", "blev", "blivit", "vara", "är", "var", "varit"],
        "vg_participle_markers": ["PC"],
    },
}


def load_voice_rules(path: Path | None) -> dict:
    """Merge a user rule file over the defaults (per dialect, per key)."""
    import json

    rules = {k: dict(v) for k, v in DEFAULT_VOICE_RULES.items()}
    if path is not None:
        user = json.loads(Path(path).read_text(encoding="utf-8"))
        for dialect, table in user.items():
            rules.setdefault(dialect, {}).update(table)
    return rules


class _SkipSentence(Exception):
    def __init__(self, reason: SkipReason, detail: str = ""):
        self.reason = reason
        self.detail = detail
        super().__init__(detail)


def _bfn_voice(s: AnnotatedSentence, rules: dict) -> Voice:
    table = rules["bfn"]
    targets = s.target_tokens()
    if not targets:
        raise _SkipSentence(SkipReason.NO_GRAMMATICAL_ANNOTATION, "target has no POS token")
    if targets[0].pos not in table["passive_target_tags"]:
        return Voice.ACT
    preceding = [
        t for t in s.tokens
        if t.span is not None and t.span.end < s.target.start
    ]
    window = preceding[-int(table["aux_window"]):]
    if any(t.surface.lower() in table["aux_forms"] for t in window):
        return Voice.PASS
    agent_prep = table["agent_preposition"]
    for fe in s.fe_spans:
        if fe.gram_function == "Ext" and fe.phrase_type:
            base, prep = _split_pt(fe.phrase_type)
            if base == "PP" and (prep or _bfn_prep(fe, s, rules)) == agent_prep:
                return Voice.PASS
    return Voice.ACT


def _vg_chain(s: AnnotatedSentence) -> list[WordAnno]:
    """Tokens linked to the target through verb-group dependency edges."""
    refs = {t.ref for t in s.target_tokens()}
    chain = list(s.target_tokens())
    changed = True
    while changed:
        changed = False
        for w in s.tokens:
            if w.ref in refs:
                continue
            links_down = w.deprel == "VG" and w.dephead in refs
            links_up = any(c.deprel == "VG" and c.dephead == w.ref for c in chain)
            if links_down or links_up:
                refs.add(w.ref)
                chain.append(w)
                changed = True
    return chain


def _swefn_voice(s: AnnotatedSentence, rules: dict) -> Voice:
    table = rules["swefn"]
    targets = s.target_tokens()
    if not targets or not any(t.msd or t.pos for t in targets):
        raise _SkipSentence(SkipReason.NO_GRAMMATICAL_ANNOTATION, "target has no MSD annotation")
    msd = targets[0].msd or ""
    if any(marker in msd.split(".") for marker in table["passive_msd_markers"]):
        return Voice.PASS
    chain = _vg_chain(s)
    has_aux = any(w.surface.lower() in table["vg_aux_forms"] for w in chain)
    has_participle = any(
        any(marker in (w.msd or "").split(".") for marker in table["vg_participle_markers"])
        for w in chain
    )
    if has_aux and has_participle:
        return Voice.PASS
    return Voice.ACT


def detect_voice(s: AnnotatedSentence, rules: dict | None = None) -> Voice:
    """Semi-heuristic voice detection driven by the configurable rule table."""
    rules = rules or DEFAULT_VOICE_RULES
    if s.dialect is Dialect.BFN_PHRASE:
        return _bfn_voice(s, rules)
    return _swefn_voice(s, rules)


# ---------------------------------------------------------------------------
# BFN generalization
# ---------------------------------------------------------------------------

_PT_RE = re.compile(r"^(?P<base>[^\[\]]+)(?:\[(?P<prep>[^\]]*)\])?$")


def _split_pt(pt: str) -> tuple[str, str | None]:
    m = _PT_RE.match(pt)
    if m is None:
        return pt, None
    return m.group("base"), m.group("prep")


def generalize_bfn_fe(pt: str, gf: str) -> Generalized | SkipReason:
    """Map a BFN phrase type / grammatical function pair onto NP, Adv or VP.

    Rules, applied in order: a PP functioning as object is an NP; PPs,
    adverbial and adjectival phrases are adverbial modifiers; an NP that is
    neither external argument nor object is also a modifier; a to-infinitive
    VP is a VP (always treated as object-like). Anything else (finite, bare,
    participial or gerundive VPs, wh- or gerund-governing PPs, clause types)
    is out of inventory.
    """
    base, prep = _split_pt(pt)
    if base == "PP" and gf == "Obj":
        return Generalized(RglType.NP, SynFunction.OBJ)
    if base in ("PP", "AVP", "AJP"):
        return Generalized(RglType.ADV, preposition=prep if base == "PP" else None)
    if base == "NP":
        if gf == "Ext":
            return Generalized(RglType.NP, SynFunction.SUBJ)
        if gf == "Obj":
            return Generalized(RglType.NP, SynFunction.OBJ)
        return Generalized(RglType.ADV)
    if base == "VPto":
        return Generalized(RglType.VP)
    return SkipReason.UNCONSIDERED_PHRASE_TYPE


def _bfn_prep(fe: FeSpan, s: AnnotatedSentence, rules: dict) -> str | None:
    """Preposition of a PP-typed FE: first span token with prepositional POS."""
    if fe.span is None:
        return None
    prep_tags = set(rules["bfn"]["preposition_pos"])
    for t in s.tokens:
        if t.span is None:
            continue
        if t.span.start >= fe.span.start and t.span.end <= fe.span.end:
            if t.pos in prep_tags:
                return t.surface.lower()
            break
    first_word = s.text[fe.span.start:fe.span.end + 1].split()
    return first_word[0].lower() if first_word else None


def _bfn_realization(fe: FeSpan, s: AnnotatedSentence, core: Coreness, rules: dict) -> FeRealization:
    pt = fe.phrase_type or ""
    gf = fe.gram_function or ""
    base, prep = _split_pt(pt)
    if base == "PP" and prep is None:
        prep = _bfn_prep(fe, s, rules)
        native_pt = f"PP[{prep}]" if prep else pt
    else:
        native_pt = pt
    native = f"{native_pt}.{gf}" if gf else native_pt

    mapped = generalize_bfn_fe(pt if prep is None else f"{base}[{prep}]", gf)
    if isinstance(mapped, SkipReason):
        return FeRealization(
            fe_name=fe.fe_name, native_type=native, rgl_type=None,
            coreness=core, skip_reason=mapped,
        )
    return FeRealization(
        fe_name=fe.fe_name,
        native_type=native,
        rgl_type=mapped.rgl_type,
        syn_function=mapped.syn_function,
        preposition=mapped.preposition if mapped.rgl_type is RglType.ADV else None,
        coreness=core,
    )


# ---------------------------------------------------------------------------
# SweFN generalization
# ---------------------------------------------------------------------------

_NOMINAL_POS = {"NN", "PN", "PM"}
_CONJ_POS = {"KN"}
_ADJ_PARTICIPLE_POS = {"JJ", "PC"}
_SUBJUNCTION_POS = {"SN"}


def _head_word(words: Sequence[WordAnno]) -> WordAnno:
    """Constituent head: the word whose dependency head lies outside the FE."""
    refs = {w.ref for w in words}
    for w in words:
        if w.dephead is None or w.dephead not in refs:
            return w
    return words[0]


def generalize_swefn_fe(words: Sequence[WordAnno]) -> Generalized | SkipReason:
    """Map a SweFN FE onto NP, Adv or VP from its first constituent.

    A leading coordinating conjunction is stepped over; for a leading
    adjective or participle the constituent head's annotations are used
    instead. Subclause realizations (subjunction-led, or headed by a verb
    outside an infinitive verb group) are skipped, mirroring how clause-typed
    phrase types are skipped on the phrase-structure side.
    """
    idx = 0
    while idx < len(words) and words[idx].pos in _CONJ_POS:
        idx += 1
    if idx >= len(words):
        return SkipReason.UNCONSIDERED_PHRASE_TYPE
    word = words[idx]
    if word.pos in _ADJ_PARTICIPLE_POS:
        word = _head_word(words)

    pos = word.pos
    deprel = word.deprel
    msd_parts = (word.msd or "").split(".")

    if pos in _SUBJUNCTION_POS:
        return SkipReason.SUBCLAUSE
    if pos in _NOMINAL_POS:
        if deprel == "SS":
            return Generalized(RglType.NP, SynFunction.SUBJ)
        if deprel in ("OO", "IO"):
            return Generalized(RglType.NP, SynFunction.OBJ)
        return Generalized(RglType.ADV)
    if pos == "PP":
        return Generalized(RglType.ADV, preposition=word.surface.lower())
    if pos == "AB":
        return Generalized(RglType.ADV)
    if pos == "VB":
        if "INF" in msd_parts and deprel == "VG":
            return Generalized(RglType.VP)
        return SkipReason.SUBCLAUSE
    return SkipReason.UNCONSIDERED_PHRASE_TYPE


def _swefn_realization(fe: FeSpan, s: AnnotatedSentence, core: Coreness) -> FeRealization:
    words = fe.words or ()
    idx = 0
    while idx < len(words) and words[idx].pos in _CONJ_POS:
        idx += 1
    effective = words[idx] if idx < len(words) else (words[0] if words else None)
    if effective is not None and effective.pos in _ADJ_PARTICIPLE_POS:
        effective = _head_word(words)
    if effective is None:
        native = ""
    else:
        native = f"{effective.msd or effective.pos}.{effective.deprel}"

    mapped = generalize_swefn_fe(words)
    if isinstance(mapped, SkipReason):
        if mapped is SkipReason.UNCONSIDERED_PHRASE_TYPE:
            logger.debug(
                "unmappable SweFN tags %r for FE %r in sentence %s",
                native, fe.fe_name, s.sentence_id,
            )
        return FeRealization(
            fe_name=fe.fe_name, native_type=native, rgl_type=None,
            coreness=core, skip_reason=mapped,
        )
    return FeRealization(
        fe_name=fe.fe_name,
        native_type=native,
        rgl_type=mapped.rgl_type,
        syn_function=mapped.syn_function,
        preposition=mapped.preposition,
        coreness=core,
    )


# ---------------------------------------------------------------------------
# Sentence pattern extraction
# ---------------------------------------------------------------------------

def _demote_extra_subjects(
    reals: list[FeRealization], sentence_id: str
) -> list[FeRealization]:
    # Annotation noise can yield several external arguments; the leftmost is
    # kept as subject, the rest become modifiers.
    seen = False
    out: list[FeRealization] = []
    for r in reals:
        if r.syn_function is SynFunction.SUBJ:
            if seen:
                logger.warning(
                    "sentence %s: extra subject %r demoted to Adv", sentence_id, r.fe_name
                )
                r = replace(
                    r, rgl_type=RglType.ADV, syn_function=SynFunction.NONE, preposition=None
                )
            seen = True
        out.append(r)
    return out


def normalize_sentence(
    s: AnnotatedSentence, index: FrameIndex, rules: dict | None = None
) -> SentencePattern | Skip:
    """Build the sentence pattern, keeping FEs that fall outside the
    interlingual inventory as untyped realizations (their native tags remain
    available for baseline statistics)."""
    rules = rules or DEFAULT_VOICE_RULES
    if s.frame not in index:
        return Skip(s.sentence_id, SkipReason.UNKNOWN_FRAME, s.frame)
    try:
        voice = detect_voice(s, rules)
    except _SkipSentence as exc:
        return Skip(s.sentence_id, exc.reason, exc.detail)

    reals: list[FeRealization] = []
    for fe in s.fe_spans:
        if fe.null_instantiated:
            continue
        core = index.coreness(s.frame, fe.fe_name)
        if s.dialect is Dialect.BFN_PHRASE:
            reals.append(_bfn_realization(fe, s, core, rules))
        else:
            reals.append(_swefn_realization(fe, s, core))
    reals = _demote_extra_subjects(reals, s.sentence_id)

    return SentencePattern(
        frame=s.frame,
        voice=voice,
        realizations=tuple(reals),
        lu_ref=s.lu_ref,
        sentence_id=s.sentence_id,
    )


def extract_sentence_pattern(
    s: AnnotatedSentence, index: FrameIndex, rules: dict | None = None
) -> SentencePattern | Skip:
    """Like :func:`normalize_sentence`, but a sentence containing any FE
    outside the interlingual inventory is skipped as a whole."""
    result = normalize_sentence(s, index, rules)
    if isinstance(result, Skip):
        return result
    for r in result.realizations:
        if r.rgl_type is None:
            assert r.skip_reason is not None
            return Skip(s.sentence_id, r.skip_reason, f"{r.fe_name}:{r.native_type}")
    return result


def promote_unconsidered_skips(
    patterns: Iterable[SentencePattern],
) -> tuple[list[SentencePattern], list[Skip]]:
    """Split already-normalized patterns into fully mappable ones and skips
    for those containing an FE outside the interlingual inventory."""
    kept: list[SentencePattern] = []
    skips: list[Skip] = []
    for p in patterns:
        bad = next((r for r in p.realizations if r.rgl_type is None), None)
        if bad is None:
            kept.append(p)
        else:
            assert bad.skip_reason is not None
            skips.append(Skip(p.sentence_id, bad.skip_reason, f"{bad.fe_name}:{bad.native_type}"))
    return kept, skips


def normalize_corpus(
    sentences: Iterable[AnnotatedSentence],
    index: FrameIndex,
    rules: dict | None = None,
    *,
    skip_unconsidered: bool = True,
) -> tuple[list[SentencePattern], list[Skip]]:
    """Normalize a corpus, splitting results into patterns and skips."""
    patterns: list[SentencePattern] = []
    skips: list[Skip] = []
    for s in sentences:
        result = normalize_sentence(s, index, rules)
        if isinstance(result, Skip):
            skips.append(result)
        else:
            patterns.append(result)
    if skip_unconsidered:
        patterns, promoted = promote_unconsidered_skips(patterns)
        skips.extend(promoted)
        skips.sort(key=lambda sk: sk.sentence_id)
    return patterns, skips


# ---------------------------------------------------------------------------
# Pattern TSV
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"^(?P<opt>Opt_)?(?P<fe>.+?)_(?P<ty>NP|Adv|VP)"
    r"(?:\.(?P<syn>Subj|Obj))?(?:\[(?P<prep>[^\]]*)\])?$"
)


def parse_fe_token(token: str) -> FeRealization:
    m = _TOKEN_RE.match(token)
    if m is None:
        raise ValueError(f"cannot parse FE token {token!r}")
    rgl = RglType(m.group("ty"))
    syn = SynFunction(m.group("syn")) if m.group("syn") else SynFunction.NONE
    return FeRealization(
        fe_name=m.group("fe"),
        native_type="",
        rgl_type=rgl,
        syn_function=syn,
        preposition=m.group("prep"),
        coreness=Coreness.NONCORE if m.group("opt") else Coreness.CORE,
    )


def write_patterns_tsv(
    patterns: Iterable[SentencePattern], path: Path, *, native: bool = False
) -> None:
    with path.open("w", encoding="utf-8") as f:
        for p in patterns:
            f.write(p.native_line() if native else p.rgl_line())
            f.write("\n")


def read_patterns_tsv(path: Path) -> list[SentencePattern]:
    patterns: list[SentencePattern] = []
    with path.open("r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise ValueError(f"{path}:{lineno}: expected 5 fields, got {len(parts)}")
            frame, voice, fes_field, lu_ref, sentence_id = parts
            reals = tuple(parse_fe_token(tok) for tok in fes_field.split() if tok)
            patterns.append(SentencePattern(
                frame=frame,
                voice=Voice(voice),
                realizations=reals,
                lu_ref=lu_ref,
                sentence_id=sentence_id,
            ))
    return patterns


def write_skips_tsv(skips: Iterable[Skip], path: Path) -> None:
    with path.open("w", encoding="utf-8") as f:
        for sk in skips:
            f.write(f"{sk.sentence_id}\t{sk.reason.value}\t{sk.detail}\n")
