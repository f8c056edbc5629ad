#!/usr/bin/env python3
"""Independent count of the fixture corpus, compared with pathnet's build report.

Reads the CSV with the standard csv module, applies the shipped cleaning rules
by hand, splits by message and counts addresses and folded edges per graph.

usage: corpus_counts.py <pathnet> <source dir> <scratch dir>
"""
import csv
import json
import re
import shutil
import subprocess
import sys
from datetime import datetime, timezone
from pathlib import Path

FIELDS = {"to", "cc", "bcc"}


def parse_time(text):
    text = text.strip()
    if len(text) == 10:
        return datetime.strptime(text, "%Y-%m-%d").replace(tzinfo=timezone.utc)
    return datetime.fromisoformat(text.replace("Z", "+00:00"))


def load(path):
    rows, rejected = [], 0
    with open(path, newline="") as f:
        reader = csv.reader(f)
        next(reader)
        for row in reader:
            try:
                mid, sender, rcpt, field, stamp = row
                sender, rcpt = sender.strip().lower(), rcpt.strip().lower()
                if not mid or not sender or not rcpt or field.strip().lower() not in FIELDS:
                    raise ValueError
                rows.append((mid, sender, rcpt, field.strip().lower(), parse_time(stamp)))
            except ValueError:
                rejected += 1
    return rows, rejected


def keep(row):
    _, sender, rcpt, _, when = row
    start = datetime(1995, 1, 1, tzinfo=timezone.utc)
    end = datetime(2002, 12, 31, 23, 59, 59, tzinfo=timezone.utc)
    if not start <= when <= end:
        return False
    for address in (sender, rcpt):
        if re.search(r"^[0-9]+$", address.split("@")[0]):
            return False
        if address.endswith(("@aircanada.com", "xpedia.com", "amazon.com")):
            return False
    return True


def graph_counts(rows, directed):
    nodes = set()
    edges = set()
    for _, sender, rcpt, _, _ in rows:
        nodes.update((sender, rcpt))
        if sender == rcpt:
            continue
        edges.add((sender, rcpt) if directed else tuple(sorted((sender, rcpt))))
    return len(nodes), len(edges)


def main():
    exe, src, scratch = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    shutil.rmtree(scratch, ignore_errors=True)
    corpus = src / "tests/data/corpus.csv"
    subprocess.run([exe, "build", "--input", str(corpus), "--rules", str(src / "data/default_rules.txt"),
                    "--out-dir", str(scratch)], check=True, capture_output=True)
    report = json.loads((scratch / "report.json").read_text())

    rows, rejected = load(corpus)
    kept = [r for r in rows if keep(r)]
    bcc_ids = {r[0] for r in kept if r[3] == "bcc"}
    groups = {
        "netgraph": [r for r in kept if r[0] not in bcc_ids],
        "bcc-netgraph": [r for r in kept if r[0] in bcc_ids],
    }

    checks = [
        ("parsed rows", report["input"]["parsed"], len(rows)),
        ("rejected rows", report["input"]["rejected"], rejected),
        ("kept records", report["cleaning"]["kept"], len(kept)),
        ("bcc messages", report["split"]["bcc_messages"], len(bcc_ids)),
    ]
    for prefix, group in groups.items():
        for directed in (True, False):
            name = f"{prefix}-{'directed' if directed else 'undirected'}"
            nodes, edges = graph_counts(group, directed)
            stats = report["graphs"][name]
            checks.append((f"{name} nodes", stats["nodes"], nodes))
            checks.append((f"{name} edges", stats["edges"], edges))
            checks.append((f"{name} records", stats["records"], len(group)))

    failures = 0
    for label, got, want in checks:
        status = "ok  " if got == want else "FAIL"
        failures += got != want
        print(f"{status} {label}: report {got}, independent count {want}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
