#!/usr/bin/env python3
"""Generate the small transaction-log fixture used by the test suite.

The output is deterministic; rerunning the script reproduces
tests/data/corpus.csv byte for byte.
"""
import argparse
import csv
import io
import random
from datetime import datetime, timedelta, timezone

CORE = [
    "alice", "bob", "carol", "dave", "erin", "frank", "grace", "heidi",
    "ivan", "judy", "mallory", "niaj", "olivia", "peggy", "rupert",
    "sybil", "trent", "victor", "walter", "zoe",
]


def address(name):
    return f"{name}@enron.com"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="tests/data/corpus.csv")
    args = parser.parse_args()

    rng = random.Random(20011202)
    start = datetime(1999, 1, 1, tzinfo=timezone.utc)
    rows = []

    def stamp():
        t = start + timedelta(minutes=rng.randrange(0, 3 * 365 * 24 * 60))
        return t.strftime("%Y-%m-%dT%H:%M:%SZ")

    def message(mid, sender, recipients, when=None):
        when = when or stamp()
        for field, rcpt in recipients:
            rows.append([mid, sender, rcpt, field, when])

    # visible-only traffic among the core group
    for i in range(70):
        sender = rng.choice(CORE)
        others = [n for n in CORE if n != sender]
        picks = rng.sample(others, rng.randint(1, 3))
        fields = [rng.choice(["TO", "TO", "CC"]) for _ in picks]
        message(f"tc{i:03d}", address(sender), [(f, address(p)) for f, p in zip(fields, picks)])

    # BCC-bearing messages inside the core group
    bcc_people = CORE[:8]
    for i in range(15):
        sender = rng.choice(bcc_people)
        others = [n for n in bcc_people if n != sender]
        picks = rng.sample(others, 2)
        message(f"bc{i:03d}", address(sender), [("TO", address(picks[0])), ("BCC", address(picks[1]))])

    # a separate three-person BCC circle
    circle = ["x.one@outside.org", "x.two@outside.org", "x.three@outside.org"]
    message("circle1", circle[0], [("BCC", circle[1])])
    message("circle2", circle[1], [("bcc", circle[2])])
    message("circle3", circle[2], [("Bcc", circle[0])])

    # noise removed by the default rules
    for i in range(5):
        message(f"old{i}", address(rng.choice(CORE)), [("TO", address(rng.choice(CORE)))],
                when=f"1993-0{i + 1}-15T08:00:00Z")
    for i in range(3):
        message(f"num{i}", "5673@aol.com", [("TO", address(rng.choice(CORE)))])
    for i in range(3):
        message(f"air{i}", address(rng.choice(CORE)), [("TO", "bookings@aircanada.com")])
    for i in range(2):
        message(f"amz{i}", "orders@amazon.com", [("TO", address(rng.choice(CORE)))])
    for i in range(2):
        message(f"xp{i}", "travel@xpedia.com", [("CC", address(rng.choice(CORE)))])

    # normalisation cases
    message("case1", "  Alice@Enron.com ", [("to", "BOB@enron.com")])
    message("self1", address("carol"), [("TO", address("carol")), ("CC", address("dave"))])
    message("quoted,1", address("erin"), [("TO", address("frank"))], when="2000-06-01")

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["message_id", "sender", "recipient", "field", "timestamp"])
    writer.writerows(rows)
    # malformed rows, each rejected by the parser
    out.write("bad1,alice@enron.com,bob@enron.com,TO,2001-13-40T00:00:00Z\n")
    out.write("bad2,alice@enron.com,bob@enron.com,XX,2001-05-01T00:00:00Z\n")
    out.write("bad3,alice@enron.com,bob@enron.com,TO\n")
    out.write("bad4,,bob@enron.com,TO,2001-05-01T00:00:00Z\n")
    with open(args.out, "w", newline="") as f:
        f.write(out.getvalue())


if __name__ == "__main__":
    main()
