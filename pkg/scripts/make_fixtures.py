#!/usr/bin/env python3
"""Generate the bundled fixture corpus: 2,000 tweets, 1,000 role triples, antonym pairs, config.

Deterministic for a fixed seed; rerun to regenerate tests/fixtures in place.
"""

from __future__ import annotations

import argparse
import json
import random
from collections import Counter
from datetime import datetime, timedelta, timezone
from pathlib import Path

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

ANTONYM_PAIRS = [
    ("private", "public"), ("closed", "open"), ("dead", "live"), ("fast", "slow"),
    ("large", "small"), ("unpaid", "paid"), ("unsafe", "safe"), ("insecure", "secure"),
    ("sick", "healthy"), ("weak", "strong"), ("old", "new"), ("empty", "full"),
    ("late", "early"), ("poor", "rich"), ("wrong", "right"), ("hard", "easy"),
    ("low", "high"), ("dark", "light"), ("cold", "warm"), ("ineligible", "eligible"),
    ("unavailable", "available"), ("partisan", "bipartisan"), ("urban", "rural"),
    ("worst", "best"),
]

VERB_LEMMAS = [
    "need", "save", "help", "protect", "stop", "slow", "prevent", "want", "combat",
    "fight", "hold", "provide", "support", "pass", "vote", "work", "respond", "test",
    "open", "close", "secure", "declare", "deliver", "expand", "fund", "serve",
    "sign", "urge", "join", "lead", "demand", "announce",
]

D_TOPICAL = [
    "free covid testing is available near you in {state} get tested today",
    "we need the resources to protect frontline workers from covid-19",
    "the coronavirus relief bill must provide paid sick leave not unpaid risk for workers",
    "families need food assistance and unemployment benefits during this covid crisis",
    "covid is hurting our communities we demand health equity and a strong public response",
    "join my facebook live town hall tonight on our covid response {url}",
    "we must expand testing to stop the coronavirus and save lives",
    "healthcare workers need masks now to stay safe from covid-19 #protectourheroes",
    "public health must come before private profit in the covid response",
    "the house will vote to fund free coronavirus testing for all americans",
    "we cannot leave renters and the poor behind in the covid relief bill",
    "tune in live i am answering your covid questions tonight {url}",
    "sick workers should never have to choose between health and a paycheck covid",
    "i urge the senate to pass the coronavirus bill and deliver paid leave",
    "our covid plan means testing for the eligible and help for every family",
]

R_TOPICAL = [
    "do your part to slow the spread of the coronavirus",
    "small businesses impacted by covid can apply for emergency loans from @sbagov",
    "president @realdonaldtrump declared a national emergency to combat the coronavirus",
    "we will hold china accountable for the covid pandemic",
    "important covid update from the white house press conference {url}",
    "our economy will come roaring back strong after we defeat the coronavirus",
    "congress passed the paycheck protection program to help small businesses hurt by covid",
    "pray for our first responders on the front lines of the covid fight",
    "we must secure our supply chains and keep shelves full during the coronavirus",
    "rt @housegop: are you doing your part to slow the spread of the covid",
    "eligible small businesses should apply early not late for covid relief loans",
    "my full statement on the covid response in {state} {url}",
    "we fight covid by keeping america open safe and working",
    "fast action and faith will carry us through the coronavirus together",
    "read this helpful covid guidance for large and small employers alike",
]

D_BACKGROUND = [
    "happy to join a live town hall with union workers tonight in {state}",
    "we must protect voting rights and make election day safe and easy",
    "climate action means clean energy jobs in urban and rural communities",
    "proud to support teachers and public schools in our district",
    "equal pay for equal work is long overdue let us make it right",
    "we need affordable housing so no family is left out in the cold",
    "i will always fight to expand health care coverage for seniors",
    "join us to demand justice and a fair shot for every worker {url}",
    "strong unions built the middle class and we will defend them",
    "our office can help with federal agencies reach out anytime",
]

R_BACKGROUND = [
    "cutting taxes helps families in {state} keep more of their paycheck",
    "we must secure the border and keep our nation safe and strong",
    "congratulations to the brave men and women of our military",
    "government overreach threatens the freedom of every american",
    "proud to support our farmers ranchers and small towns",
    "the right to keep and bear arms shall not be infringed",
    "i will lead the fight against wasteful spending in washington",
    "school choice gives every child rich or poor a fair start",
    "we announce new funding to serve veterans across {state} {url}",
    "low taxes high hopes that is how we grow the economy",
]

COVERAGE = [
    "from the earliest days to the late nights our team works for you",
    "whether rich or poor sick or healthy every american deserves respect",
    "the choice between right and wrong should never be hard politics",
    "bright light after dark days and warm hearts in cold times",
    "empty promises versus a full plan we choose the plan",
    "strong communities are never weak when neighbors help neighbors",
    "new ideas and old wisdom both guide our work every day",
    "available resources should never be unavailable when people need them most",
    "partisan gridlock or bipartisan progress the answer is easy",
    "we fight we serve we deliver and we never stop working",
    "i urge congress to pass fund and sign the bill",
    "governors declare respond and lead while mayors announce and plan",
    "help save protect provide support those are our watchwords",
    "we want answers we demand the truth and we prevent harm",
    "close the gaps open the doors and expand what works",
    "hold the line test the limits and secure the future",
    "the worst of times can still bring out the best in us",
    "high turnout low barriers that is a healthy democracy",
    "a safe harbor in an unsafe storm that is our promise",
    "paid fairly or unpaid and unseen workers deserve better",
    "eligible or ineligible every caller gets an answer from us",
    "urban centers and rural towns deserve the same fast internet not slow",
    "open doors and closed loopholes that is accountable government",
    "live updates not dead ends we report the facts to you",
    "no one should feel insecure about rent food or care",
]

STATES = ["ohio", "texas", "georgia", "michigan", "arizona", "vermont", "colorado",
          "florida", "virginia", "nevada", "oregon", "maine", "iowa", "kansas"]

D_AUTHORS = ["repmartinez", "senatorokafor", "govwhitfield", "repchens", "senatorbloom",
             "repdelgado", "govramirez", "repfoster", "senatorpruitt", "repnguyen"]
R_AUTHORS = ["repcaldwell", "senatorhardy", "govstockton", "repboone", "senatorgrove",
             "repwhitaker", "govmcallister", "repduncan", "senatorpike", "repvance"]

HASHTAGS = ["#inittogether", "#covid19", "#familiesfirst", "#backtowork", "#strongertogether",
            "#voteblue", "#maga", "#smallbusiness", "#frontlineheroes", "#openourstates"]
MENTIONS = ["@cdcgov", "@sbagov", "@whitehouse", "@speakerpelosi", "@gopleader",
            "@realdonaldtrump", "@housegop", "@housedemocrats"]

TRIPLE_AGENTS = [
    "i", "we", "they", "you", "democrats", "republicans", "trump", "pelosi",
    "the president", "the governor", "my colleagues", "the cdc", "congress",
    "small businesses", "our state", "the senate", "speaker pelosi",
    "house democrats", "senate republicans", "the administration", "families",
    "workers", "socialism", "the american people of this great nation",
    "the small business owners across our entire state",
]
TRIPLE_PATIENTS = [
    "lives", "the resources", "the support", "covid", "small businesses",
    "our communities", "americans", "the spread", "relief", "answers",
    "a news conference", "the bill", "paid leave", "testing", "our economy",
    "health care", "the virus", "frontline workers", "unemployment benefits",
    "everything we can", "justice", "the truth", "our seniors", "this crisis",
    "the american people", "nations", "a press conference", "the mission",
    "the most sweeping relief package in modern american history",
]

D_PLANTED = [
    ("they", "need", "the resources", 26),
    ("we", "save", "lives", 20),
    ("we", "provide", "the support", 15),
    ("they", "need", "the support", 12),
    ("we", "protect", "frontline workers", 10),
    ("we", "want", "answers", 9),
    ("we", "help", "americans", 8),
    ("trump", "hold", "a press conference", 6),
    ("we", "stop", "the spread", 6),
    ("house democrats", "pass", "the bill", 6),
    ("we", "demand", "justice", 5),
    ("they", "want", "the truth", 5),
]
R_PLANTED = [
    ("we", "combat", "covid", 24),
    ("i", "hold", "a news conference", 17),
    ("covid", "hurt", "small businesses", 12),
    ("we", "fight", "covid", 12),
    ("we", "slow", "the spread", 10),
    ("socialism", "hurt", "nations", 7),
    ("we", "protect", "our economy", 7),
    ("pelosi", "stop", "the bill", 6),
    ("we", "save", "small businesses", 6),
    ("democrats", "want", "the bill", 5),
    ("we", "open", "our economy", 5),
    ("i", "announce", "relief", 5),
]

INFLECTIONS = {
    "need": ["need", "needs", "needed"],
    "save": ["save", "saving", "saved"],
    "help": ["help", "helping", "helped"],
    "hold": ["hold", "holding", "held"],
    "combat": ["combat", "combating"],
    "fight": ["fight", "fighting"],
    "want": ["want", "wants", "wanted"],
    "stop": ["stop", "stopping", "stopped"],
    "provide": ["provide", "provides", "provided"],
    "hurt": ["hurt", "hurting"],
}


def build_tweets(rng: random.Random, n: int) -> list[dict]:
    tweets = []
    start = datetime(2020, 2, 1, tzinfo=timezone.utc)
    span_minutes = int((datetime(2020, 7, 22, tzinfo=timezone.utc) - start).total_seconds() / 60)
    coverage_quota = list(COVERAGE) * 6  # guarantees pole/verb vocabulary coverage
    for i in range(n):
        party = "D" if rng.random() < 0.55 else "R"
        author = rng.choice(D_AUTHORS if party == "D" else R_AUTHORS)
        chamber = rng.choice(["senate", "house", "house", "governor"])
        if coverage_quota and rng.random() < 0.09:
            template = coverage_quota.pop()
            topical = False
        else:
            topical = rng.random() < 0.42
            if party == "D":
                template = rng.choice(D_TOPICAL if topical else D_BACKGROUND)
            else:
                template = rng.choice(R_TOPICAL if topical else R_BACKGROUND)
        text = template.format(state=rng.choice(STATES), url="https://t.co/" +
                               "".join(rng.choices("abcdefghij0123456789", k=8)))
        if rng.random() < 0.35:
            text += " " + rng.choice(HASHTAGS)
        if rng.random() < 0.2:
            text += " " + rng.choice(MENTIONS)
        is_retweet = rng.random() < 0.15
        if is_retweet:
            text = f"rt {rng.choice(MENTIONS)}: {text}"
        timestamp = (start + timedelta(minutes=rng.randrange(span_minutes))).strftime(
            "%Y-%m-%dT%H:%M:%SZ")
        tweets.append({
            "id": f"t{i:05d}",
            "author": author,
            "party": party,
            "chamber": chamber,
            "timestamp": timestamp,
            "lang": "en",
            "text": text,
            "is_retweet": is_retweet,
        })
    return tweets


def build_triples(rng: random.Random, tweets: list[dict], n: int) -> list[dict]:
    by_party = {"D": [t for t in tweets if t["party"] == "D"],
                "R": [t for t in tweets if t["party"] == "R"]}
    records = []

    def emit(party: str, agent: str, lemma: str, patient: str) -> None:
        doc = rng.choice(by_party[party])
        surface = rng.choice(INFLECTIONS.get(lemma, [lemma]))
        records.append({
            "doc_id": doc["id"],
            "party": party,
            "sentence_idx": rng.randrange(3),
            "verb": surface,
            "verb_lemma": lemma,
            "agent": agent,
            "patient": patient,
        })

    for party, planted in (("D", D_PLANTED), ("R", R_PLANTED)):
        for agent, lemma, patient, count in planted:
            for _ in range(count):
                emit(party, agent, lemma, patient)
    while len(records) < n:
        party = "D" if rng.random() < 0.55 else "R"
        agent = rng.choice(TRIPLE_AGENTS)
        lemma = rng.choice(VERB_LEMMAS)
        patient = rng.choice(TRIPLE_PATIENTS)
        emit(party, agent, lemma, patient)
    rng.shuffle(records)
    return records[:n]


def check_vocabulary(tweets: list[dict], min_count: int = 6) -> None:
    import sys
    sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
    from narraframe.corpus import normalize_topic_tokens, tokenize

    counts = Counter()
    for t in tweets:
        counts.update(normalize_topic_tokens(tokenize(t["text"])))
    missing = []
    for neg, pos in ANTONYM_PAIRS:
        for pole in (neg, pos):
            if counts[pole] < min_count:
                missing.append((pole, counts[pole]))
    for lemma in VERB_LEMMAS:
        if counts[lemma] < min_count:
            missing.append((lemma, counts[lemma]))
    if missing:
        raise SystemExit(f"fixture vocabulary too sparse: {missing}")


def write_config(fixture_dir: Path) -> None:
    config = {
        "tweets_path": "tweets_2000.jsonl",
        "antonym_pairs_path": "antonym_pairs.tsv",
        "triples_path": "triples_1000.jsonl",
        "out_dir": "out",
        "topic_keywords": ["covid", "coronavirus"],
        "party_seeds": {"D": ["democrats", "pelosi"], "R": ["republicans", "trump"]},
        "party_terms": {
            "D": ["democrats", "pelosi", "speaker pelosi", "house democrats", "schumer"],
            "R": ["republicans", "trump", "mcconnell", "senate republicans", "gop"],
        },
        "exclusions": ["@realdonaldtrump", "@speakerpelosi", "@housegop",
                       "@housedemocrats", "@gopleader"],
        "merge_map": {"american people": "americans", "news conference": "press conference"},
        "verb_sets": {"help": ["help", "save", "protect"],
                      "stop": ["stop", "slow", "prevent"],
                      "want": ["want"]},
        "stage": {"term_clusters": 6, "verb_clusters": 15},
        "embedding": {"dim": 50, "epochs": 40, "window": 10, "min_count": 5,
                      "seed": 11, "workers": 1},
        "umap": {"n_neighbors": 10, "min_dist": 0.1, "epochs": 150, "seed": 42},
        "kmeans": {"restarts": 6, "max_iter": 100, "seed": 7},
    }
    with open(fixture_dir / "config.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(config, fh, indent=2)
        fh.write("\n")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20200201)
    parser.add_argument("--tweets", type=int, default=2000)
    parser.add_argument("--triples", type=int, default=1000)
    parser.add_argument("--out", type=Path, default=FIXTURE_DIR)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)

    tweets = build_tweets(rng, args.tweets)
    check_vocabulary(tweets)
    with open(args.out / "tweets_2000.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for t in tweets:
            fh.write(json.dumps(t) + "\n")

    triples = build_triples(rng, tweets, args.triples)
    with open(args.out / "triples_1000.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for r in triples:
            fh.write(json.dumps(r) + "\n")

    with open(args.out / "antonym_pairs.tsv", "w", encoding="utf-8", newline="\n") as fh:
        for neg, pos in ANTONYM_PAIRS:
            fh.write(f"{neg}\t{pos}\n")

    write_config(args.out)
    parties = Counter(t["party"] for t in tweets)
    print(f"wrote {len(tweets)} tweets ({dict(parties)}), {len(triples)} triples, "
          f"{len(ANTONYM_PAIRS)} antonym pairs -> {args.out}")


if __name__ == "__main__":
    main()
