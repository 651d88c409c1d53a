"""Verb lexicon and rule-based lemmatizer for the pattern labeler."""

from __future__ import annotations

VERB_LEXICON = frozenset("""
accept act add address adopt agree aid announce answer apply appreciate approve
argue ask attack back ban bear beat become begin believe block break bring build
buy call care carry cause celebrate challenge change check choose close combat
come commit condemn confirm congratulate connect consider continue convene cost
count cover create cut deal debate decide declare decrease defeat defend delay
deliver demand deny deserve destroy develop discuss do donate double drive drop
earn eat elect emphasize encourage end endorse enforce ensure enter expand expect
face fail fall fear feed feel fight file fill find finish fix flatten focus follow
force forget fund gather get give go grow guarantee handle happen hate have heal
hear help hit hold honor hope host hurt ignore impact improve include increase
infringe introduce invest invite join keep know launch lay lead learn leave let
lift like listen live lock look lose love lower make manage mark matter mean meet
miss move need offer open oppose order organize own pass pay plan play pledge
praise pray prepare present press prevent promise protect provide push put raise
reach read rebuild receive recognize recommend recommit recover reduce reject
release remain remember remind remove reopen report represent request require
rescue respond rest restore return rise risk run save say secure see seek sell
send serve set share shut sign slow speak spend spread stand start state stay
stop strengthen strike succeed suffer support survive take talk tell test testify
thank think threaten thrive track trade train travel trust try turn understand
unite urge use visit vote wait want warn waste watch wear welcome win wish
withstand work worry write
""".split())

# Auxiliaries and modals: members of a verb group, never the emitted predicate
# unless no lexical verb follows.
AUXILIARIES = frozenset("""
am is are was were be been being have has had do does did will would can could
shall should may might must
""".split())

IRREGULAR_LEMMAS = {
    "am": "be", "is": "be", "are": "be", "was": "be", "were": "be", "been": "be",
    "being": "be", "began": "begin", "begun": "begin", "bore": "bear",
    "beat": "beat", "became": "become", "bought": "buy", "broke": "break",
    "broken": "break", "brought": "bring", "built": "build", "came": "come",
    "chose": "choose", "chosen": "choose", "cost": "cost", "cut": "cut",
    "dealt": "deal", "did": "do", "does": "do", "done": "do", "drove": "drive",
    "driven": "drive", "ate": "eat", "eaten": "eat", "fell": "fall",
    "fallen": "fall", "felt": "feel", "fought": "fight", "found": "find",
    "forgot": "forget", "forgotten": "forget", "gave": "give", "given": "give",
    "got": "get", "gotten": "get", "grew": "grow", "grown": "grow", "had": "have",
    "has": "have", "heard": "hear", "held": "hold", "hit": "hit", "hurt": "hurt",
    "kept": "keep", "knew": "know", "known": "know", "laid": "lay", "led": "lead",
    "learnt": "learn", "left": "leave", "let": "let", "lost": "lose",
    "made": "make", "meant": "mean", "met": "meet", "paid": "pay", "put": "put",
    "ran": "run", "read": "read", "rose": "rise", "risen": "rise", "said": "say",
    "saw": "see", "seen": "see", "sent": "send", "set": "set", "shut": "shut",
    "sold": "sell", "spent": "spend", "spoke": "speak", "spoken": "speak",
    "spread": "spread", "stood": "stand", "struck": "strike", "took": "take",
    "taken": "take", "taught": "teach", "thought": "think", "told": "tell",
    "went": "go", "gone": "go", "goes": "go", "wore": "wear", "worn": "wear", "won": "win",
    "wrote": "write", "written": "write", "withstood": "withstand",
}

_VOWELS = set("aeiou")


def _strip_suffix(word: str) -> str | None:
    """Suffix rules validated against the lexicon; None when nothing matches."""
    if word.endswith("ies") and len(word) > 4:
        stem = word[:-3] + "y"
        if stem in VERB_LEXICON:
            return stem
    if word.endswith("es"):
        stem = word[:-2]
        if stem in VERB_LEXICON and stem.endswith(("s", "x", "z", "ch", "sh")):
            return stem
    if word.endswith("s") and not word.endswith("ss"):
        stem = word[:-1]
        if stem in VERB_LEXICON:
            return stem
    for suffix in ("ed", "ing"):
        if word.endswith(suffix) and len(word) > len(suffix) + 1:
            stem = word[: -len(suffix)]
            if stem in VERB_LEXICON:
                return stem
            if stem + "e" in VERB_LEXICON:
                return stem + "e"
            if len(stem) >= 2 and stem[-1] == stem[-2] and stem[:-1] in VERB_LEXICON:
                return stem[:-1]
            if word.endswith("ied") and stem[:-1] + "y" in VERB_LEXICON:
                return stem[:-1] + "y"
    return None


def lemmatize(word: str) -> str | None:
    """Lemma for a verb form, or None when the form is not a known verb."""
    word = word.lower()
    if word in IRREGULAR_LEMMAS:
        return IRREGULAR_LEMMAS[word]
    if word in VERB_LEXICON:
        return word
    return _strip_suffix(word)


def is_verb_form(word: str) -> bool:
    return lemmatize(word) is not None
