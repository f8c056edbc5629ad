#!/usr/bin/env python3
"""Convert the Enron MySQL dump into the pathnet transaction log.

Reads the `message` and `recipientinfo` tables from a mysqldump file (plain
or gzip) and writes one row per recipient:

    message_id,sender,recipient,field,timestamp

The numeric `mid` is used as message id. The timestamp is the message date,
written as UTC. Recipients with an empty address are skipped.

usage: enron_to_csv.py enron-mysqldump.sql[.gz] -o enron.csv
"""
import argparse
import csv
import gzip
import re
import sys

CREATE = re.compile(r"CREATE TABLE `?(\w+)`?")
COLUMN = re.compile(r"^\s*`?(\w+)`?\s+\w+")
INSERT = re.compile(r"INSERT INTO `?(\w+)`?(?:\s*\(([^)]*)\))?\s+VALUES\s*", re.IGNORECASE)
ESCAPES = {"0": "\0", "b": "\b", "n": "\n", "r": "\r", "t": "\t", "Z": "\x1a"}


def open_dump(path):
    if path.endswith(".gz"):
        return gzip.open(path, "rt", encoding="latin-1", newline="")
    return open(path, "rt", encoding="latin-1", newline="")


def tuples(text, pos):
    """Yields the value tuples of one extended INSERT starting at pos."""
    n = len(text)
    while pos < n:
        while pos < n and text[pos] in " \t\r\n,":
            pos += 1
        if pos >= n or text[pos] == ";":
            return
        if text[pos] != "(":
            raise ValueError(f"expected '(' at offset {pos}")
        pos += 1
        row = []
        while True:
            while text[pos] in " \t\r\n":
                pos += 1
            if text[pos] == "'":
                pos += 1
                chunks = []
                while True:
                    c = text[pos]
                    if c == "\\":
                        nxt = text[pos + 1]
                        chunks.append(ESCAPES.get(nxt, nxt))
                        pos += 2
                    elif c == "'":
                        if pos + 1 < n and text[pos + 1] == "'":
                            chunks.append("'")
                            pos += 2
                        else:
                            pos += 1
                            break
                    else:
                        chunks.append(c)
                        pos += 1
                row.append("".join(chunks))
            else:
                end = pos
                while text[end] not in ",)":
                    end += 1
                token = text[pos:end].strip()
                row.append(None if token.upper() == "NULL" else token)
                pos = end
            if text[pos] == ",":
                pos += 1
                continue
            pos += 1  # ')'
            yield row
            break


def read_tables(path, wanted):
    columns, rows = {}, {name: [] for name in wanted}
    current = None
    with open_dump(path) as dump:
        for line in dump:
            created = CREATE.match(line)
            if created:
                current = created.group(1)
                columns[current] = []
                continue
            if current and line.startswith(")"):
                current = None
                continue
            if current:
                column = COLUMN.match(line)
                if column and column.group(1).upper() not in ("PRIMARY", "KEY", "UNIQUE", "INDEX", "CONSTRAINT"):
                    columns[current].append(column.group(1))
                continue
            insert = INSERT.match(line)
            if not insert or insert.group(1) not in wanted:
                continue
            table = insert.group(1)
            names = ([c.strip(" `") for c in insert.group(2).split(",")] if insert.group(2)
                     else columns.get(table))
            if not names:
                raise ValueError(f"no column list for table {table}")
            for values in tuples(line, insert.end()):
                rows[table].append(dict(zip(names, values)))
    return rows


def timestamp(value):
    # MySQL DATETIME "2001-05-14 16:39:00" -> ISO 8601 UTC
    return value.strip().replace(" ", "T") + "Z"


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("dump")
    parser.add_argument("-o", "--output", default="-")
    args = parser.parse_args()

    tables = read_tables(args.dump, {"message", "recipientinfo"})
    messages = {row["mid"]: row for row in tables["message"]}
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="", encoding="utf-8")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["message_id", "sender", "recipient", "field", "timestamp"])
    written = skipped = 0
    for rec in tables["recipientinfo"]:
        message = messages.get(rec["mid"])
        recipient = (rec.get("rvalue") or "").strip()
        if message is None or not recipient or not (message.get("sender") or "").strip():
            skipped += 1
            continue
        writer.writerow([rec["mid"], message["sender"].strip(), recipient,
                         (rec.get("rtype") or "").upper(), timestamp(message["date"])])
        written += 1
    if out is not sys.stdout:
        out.close()
    print(f"{written} rows written, {skipped} skipped", file=sys.stderr)


if __name__ == "__main__":
    main()
