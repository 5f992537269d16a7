"""
Negative rules: learning which single words must not swap
=========================================================

Two reference records that differ by exactly one word on each side are
distinct entities (the reference table is duplicate-free), so that word
pair is a distinction that matters: "football" is not "baseball", "2007"
is not "2008".  Candidate pairs differing exactly by a learned pair are
discarded before any distance is computed, no matter how similar they look.
"""

import itertools

from fuzzyjoin import learn_rules, pair_blocked, preprocess_for_rules

reference = [
    "2007 LSU Tigers football team",
    "2008 LSU Tigers football team",
    "2007 LSU Tigers baseball team",
    "2007 Wisconsin Badgers football team",
    "2008 Wisconsin Badgers football team",
]

prepped = [preprocess_for_rules(v) for v in reference]
rules = learn_rules(itertools.combinations(prepped, 2))

print("reference records:")
for v in reference:
    print("  ", v)
print()
print("learned negative rules (words are stemmed):")
for rule in sorted(rules):
    print(f"  {rule.word_a!r}  !=  {rule.word_b!r}")
print()

candidates = [
    ("2007 LSU Tigers football team", "2007 LSU Tigers baseball team"),
    ("2007 Wisconsin Badgers football team", "2008 Wisconsin Badgers football team"),
    ("2007 LSU Tigers football team", "2007 LSU Tigers footbal team"),  # typo: kept
]
print("candidate pairs against the rules:")
for l, r in candidates:
    blocked = pair_blocked(preprocess_for_rules(l), preprocess_for_rules(r), rules)
    verdict = "DISCARDED" if blocked else "kept"
    print(f"  {verdict:9s} {l!r} vs {r!r}")
