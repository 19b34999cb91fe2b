#!/usr/bin/env python3
"""Regenerate data/links.tsv from the Rolfsen/Thistlethwaite tables shipped
with spherogram. Reidemeister duplicates are produced by seeded random
backtracking moves and named `<base>@<variant>`."""
import random
import sys

import spherogram as sp


def pd_text(link):
    quads = link.PD_code()
    return "PD[" + ", ".join(
        "X({},{},{},{})".format(*(x + 1 for x in q)) for q in quads) + "]"


def table_names():
    for n in range(3, 9):
        i = 1
        while True:
            name = f"{n}_{i}"
            try:
                yield name, sp.Link(name)
            except Exception:
                break
            i += 1
    for n in range(2, 9):
        for kind in "an":
            i = 1
            while True:
                name = f"L{n}{kind}{i}"
                try:
                    yield name, sp.Link(name)
                except Exception:
                    break
                i += 1


def main(out):
    rows = [("U", "U", 1)]
    links = {}
    for name, link in table_names():
        links[name] = link
        rows.append((name, pd_text(link), len(link.link_components)))
    aliases = [("trefoil_L", links["3_1"]), ("trefoil_R", links["3_1"].mirror()),
               ("figure8", links["4_1"]), ("hopf", links["L2a1"])]
    for name, link in aliases:
        rows.append((name, pd_text(link), len(link.link_components)))
    rows.append(("unknot_kink", "PD[X(1,2,2,1)]", 1))
    random.seed(20261018)
    dup_bases = ["3_1", "4_1", "5_1", "5_2", "6_1", "6_2", "7_4", "L2a1",
                 "L4a1", "L5a1", "L6a4", "L6n1", "L7n1"]
    for base in dup_bases:
        made = 0
        attempt = 0
        while made < 2 and attempt < 200:
            attempt += 1
            link = links[base].copy()
            link.backtrack(steps=random.randint(2, 6))
            if not (len(link.crossings) <= 10
                    and len(link.crossings) > len(links[base].crossings)):
                continue
            made += 1
            rows.append((f"{base}@r{made}", pd_text(link),
                         len(link.link_components)))
    with open(out, "w", encoding="utf-8") as f:
        f.write("# name\tPD code\tcomponents\n")
        f.write("# prime knots and links up to 8 crossings (Rolfsen and\n")
        f.write("# Thistlethwaite numbering); `base@rN` entries are diagrams\n")
        f.write("# of `base` related to it by Reidemeister moves.\n")
        for name, pd, comps in rows:
            f.write(f"{name}\t{pd}\t{comps}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/links.tsv")
