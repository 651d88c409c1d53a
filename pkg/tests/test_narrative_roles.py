import json
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from narraframe import narrative_roles as roles
from narraframe.narrative_roles import MembershipCategory


def triple(agent="we", verb="save", patient="lives", party="D", doc_id="d1",
           lemma=None) -> roles.RoleTriple:
    lemma = lemma or verb
    return roles.RoleTriple(
        doc_id=doc_id, party=party, agent=agent, verb_lemma=lemma, patient=patient,
        agent_token_count=len(agent.split()), patient_token_count=len(patient.split()),
        verb=verb)


def random_triples(seed, n=200):
    rng = random.Random(seed)
    agents = ["we", "they", "i", "trump", "pelosi", "the cdc", "democrats",
              "house democrats", "small businesses", "the american people of ohio"]
    verbs = ["need", "save", "help", "stop", "want", "hold", "protect"]
    patients = ["lives", "the resources", "covid", "a press conference",
                "the bill", "answers", "the spread"]
    return [triple(agent=rng.choice(agents), verb=rng.choice(verbs),
                   patient=rng.choice(patients), party=rng.choice("DR"),
                   doc_id=f"t{rng.randint(0, 99)}")
            for _ in range(n)]


class TestLoadTriples:
    def _write(self, tmp_path, records):
        path = tmp_path / "triples.jsonl"
        with open(path, "w") as fh:
            for r in records:
                fh.write((r if isinstance(r, str) else json.dumps(r)) + "\n")
        return path

    def _record(self, **overrides):
        rec = {"doc_id": "t1", "party": "D", "sentence_idx": 0, "verb": "saves",
               "verb_lemma": "save", "agent": "We", "patient": "Lives"}
        rec.update(overrides)
        return rec

    def test_three_valid_lines(self, tmp_path):
        path = self._write(tmp_path, [self._record(doc_id=f"t{i}") for i in range(3)])
        loaded = roles.load_triples(path)
        assert len(loaded) == 3
        assert loaded[0].agent == "we"
        assert loaded[0].patient == "lives"

    def test_missing_verb_skipped(self, tmp_path):
        bad = self._record()
        del bad["verb"]
        path = self._write(tmp_path, [self._record(), bad])
        assert len(roles.load_triples(path)) == 1

    def test_missing_role_skipped(self, tmp_path):
        no_patient = self._record()
        del no_patient["patient"]
        path = self._write(tmp_path, [self._record(), no_patient])
        assert len(roles.load_triples(path)) == 1

    def test_malformed_line_skipped(self, tmp_path):
        path = self._write(tmp_path, [self._record(), "{oops"])
        assert len(roles.load_triples(path)) == 1

    def test_unreadable_file_fatal(self, tmp_path):
        with pytest.raises(OSError):
            roles.load_triples(tmp_path / "nope.jsonl")

    def test_fixture_count_matches_line_oracle(self, fixture_triples_path):
        valid = 0
        with open(fixture_triples_path) as fh:
            for line in fh:
                rec = json.loads(line)
                if all(str(rec.get(k, "")).strip()
                       for k in ("doc_id", "party", "verb", "verb_lemma",
                                 "agent", "patient")):
                    valid += 1
        assert len(roles.load_triples(fixture_triples_path)) == valid == 1000

    def test_token_counts_derived_by_whitespace(self, tmp_path):
        path = self._write(tmp_path, [self._record(agent="the small business owners")])
        loaded = roles.load_triples(path)
        assert loaded[0].agent_token_count == 4


class TestFilterTriples:
    def test_four_token_agent_dropped(self):
        long_agent = triple(agent="the small business owners")
        assert roles.filter_triples([long_agent]) == []

    def test_short_roles_kept(self):
        t = triple(agent="we", patient="lives")
        assert roles.filter_triples([t]) == [t]

    def test_planted_long_fraction_matches_hand_count(self):
        rng = random.Random(17)
        triples = []
        expected_kept = 0
        for i in range(100):
            if rng.random() < 0.4:
                triples.append(triple(agent="one two three four five", doc_id=f"d{i}"))
            else:
                triples.append(triple(agent="we", doc_id=f"d{i}"))
                expected_kept += 1
        kept = roles.filter_triples(triples)
        assert len(kept) == expected_kept

    def test_idempotent_subset(self):
        triples = random_triples(3)
        once = roles.filter_triples(triples)
        assert roles.filter_triples(once) == once
        assert set(id(t) for t in once) <= set(id(t) for t in triples)


class TestCombinationFrequencies:
    def test_three_identical(self):
        counts = roles.combination_frequencies([triple()] * 3)
        assert counts[("we", "save", "lives")] == 3

    @given(st.integers(0, 2**31))
    @settings(max_examples=25, deadline=None)
    def test_matches_bruteforce_recount(self, seed):
        triples = random_triples(seed)
        counts = roles.combination_frequencies(triples)
        oracle = {}
        for t in triples:
            key = (t.agent, t.verb_lemma, t.patient)
            oracle[key] = oracle.get(key, 0) + 1
        assert dict(counts) == oracle


class TestDifferentialCombinations:
    def test_equal_counts_all_zero(self):
        counts = roles.combination_frequencies(random_triples(1))
        top_a, top_b = roles.differential_combinations(counts, counts, k=5)
        assert all(c.diff == 0 for c in top_a + top_b)

    def test_matches_sort_oracle(self):
        counts_a = Counter({("we", "save", "lives"): 9, ("they", "need", "help"): 2,
                            ("i", "hold", "a hearing"): 4})
        counts_b = Counter({("we", "save", "lives"): 1, ("they", "need", "help"): 7,
                            ("covid", "hurt", "jobs"): 3})
        top_a, top_b = roles.differential_combinations(counts_a, counts_b, k=2)
        assert [(c.agent, c.verb, c.patient) for c in top_a] == \
            [("we", "save", "lives"), ("i", "hold", "a hearing")]
        assert [(c.agent, c.verb, c.patient) for c in top_b] == \
            [("they", "need", "help"), ("covid", "hurt", "jobs")]

    def test_disjoint_when_diffs_strict(self):
        counts_a = Counter({("a", "v", "p"): 5, ("b", "v", "p"): 1})
        counts_b = Counter({("a", "v", "p"): 1, ("b", "v", "p"): 5})
        top_a, top_b = roles.differential_combinations(counts_a, counts_b, k=1)
        keys_a = {(c.agent, c.verb, c.patient) for c in top_a}
        keys_b = {(c.agent, c.verb, c.patient) for c in top_b}
        assert not keys_a & keys_b


class TestTopAgentsPatients:
    def test_single_triple(self):
        agents, patients = roles.top_agents_patients([triple()], n=5)
        assert agents == [("we", 1)]
        assert patients == [("lives", 1)]

    @given(st.integers(0, 2**31))
    @settings(max_examples=25, deadline=None)
    def test_matches_counting_oracle(self, seed):
        triples = random_triples(seed)
        agents, patients = roles.top_agents_patients(triples, n=3)
        agent_counts = Counter(t.agent for t in triples)
        patient_counts = Counter(t.patient for t in triples)
        assert agents == sorted(agent_counts.items(), key=lambda kv: (-kv[1], kv[0]))[:3]
        assert patients == sorted(patient_counts.items(), key=lambda kv: (-kv[1], kv[0]))[:3]


class TestCategorizeMemberships:
    def test_us_and_them_words(self):
        tagged = roles.categorize_memberships([triple(agent="we"), triple(agent="they")])
        assert tagged[0][1] is MembershipCategory.US
        assert tagged[1][1] is MembershipCategory.THEM

    def test_party_term_containment(self):
        d_terms = ["pelosi", "democrats", "nancy pelosi"]
        tagged = roles.categorize_memberships(
            [triple(agent="pelosi", party="R"),
             triple(agent="speaker nancy pelosi", party="R"),
             triple(agent="gopher", party="R")],
            other_party_terms=d_terms)
        assert tagged[0][1] is MembershipCategory.OTHER_PARTY
        assert tagged[1][1] is MembershipCategory.OTHER_PARTY
        assert tagged[2][1] is MembershipCategory.OTHER

    def test_unmatched_agent_is_other(self):
        tagged = roles.categorize_memberships([triple(agent="the cdc")])
        assert tagged[0][1] is MembershipCategory.OTHER

    def test_precedence_us_over_party_terms(self):
        tagged = roles.categorize_memberships([triple(agent="we")],
                                              other_party_terms=["we"])
        assert tagged[0][1] is MembershipCategory.US

    def test_multi_token_agent_with_pronoun_falls_through(self):
        tagged = roles.categorize_memberships([triple(agent="we democrats")],
                                              other_party_terms=["democrats"])
        assert tagged[0][1] is MembershipCategory.OTHER_PARTY

    @given(st.integers(0, 2**31))
    @settings(max_examples=25, deadline=None)
    def test_total_and_deterministic(self, seed):
        triples = random_triples(seed)
        tagged = roles.categorize_memberships(triples, other_party_terms=["trump"])
        assert len(tagged) == len(triples)
        counts = Counter(cat for _, cat in tagged)
        assert sum(counts.values()) == len(triples)
        again = roles.categorize_memberships(triples, other_party_terms=["trump"])
        assert [c for _, c in tagged] == [c for _, c in again]


class TestPatientsForVerbset:
    def test_planted_verbset_matches_filtered_oracle(self):
        triples = random_triples(29, n=300)
        tagged = roles.categorize_memberships(triples)
        verbs = {"help", "save", "protect"}
        result = roles.patients_for_verbset(tagged, verbs, MembershipCategory.US, n=5)
        oracle: dict[str, Counter] = {}
        for t, cat in tagged:
            if cat is MembershipCategory.US and t.verb_lemma in verbs:
                oracle.setdefault(t.party, Counter())[roles.merge_patient(t.patient)] += 1
        assert set(result) == set(oracle)
        for party, ranked in result.items():
            expected = sorted(oracle[party].items(), key=lambda kv: (-kv[1], kv[0]))[:5]
            assert ranked == expected

    def test_empty_verb_intersection(self):
        tagged = roles.categorize_memberships([triple(verb="save")])
        result = roles.patients_for_verbset(tagged, {"discuss"}, MembershipCategory.US, n=5)
        assert result == {}

    def test_article_stripped_and_merged(self):
        tagged = roles.categorize_memberships(
            [triple(patient="the resources"), triple(patient="resources")])
        result = roles.patients_for_verbset(
            tagged, {"save"}, MembershipCategory.US, n=5,
            merge_map={"resources": "funding"})
        assert result["D"] == [("funding", 2)]

    def test_raw_counts_keep_articles(self):
        counts = roles.combination_frequencies([triple(patient="the resources")])
        assert ("we", "save", "the resources") in counts

    def test_empty_verbs_rejected(self):
        with pytest.raises(ValueError):
            roles.patients_for_verbset([], set(), MembershipCategory.US, n=1)


class TestTopVerbs:
    def test_default_n_is_100(self):
        import inspect
        assert inspect.signature(roles.top_verbs).parameters["n"].default == 100

    def test_single_triple(self):
        assert roles.top_verbs([triple(verb="declare")]) == ["declare"]

    @given(st.integers(0, 2**31))
    @settings(max_examples=25, deadline=None)
    def test_matches_counting_oracle(self, seed):
        triples = random_triples(seed)
        counts = Counter(t.verb_lemma for t in triples)
        expected = [v for v, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))][:4]
        assert roles.top_verbs(triples, n=4) == expected
