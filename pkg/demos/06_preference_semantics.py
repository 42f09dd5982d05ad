"""Preference semantics
=====================

Hard selectional constraints prune too eagerly on real text, so role
fillers are scored instead of filtered: five steps from "satisfies the
basic constraint" (1.0) down to "disjoint from everything the
constraint allows" (0.01).  Per-relation scores multiply, so an
expression is never zeroed out, just ranked down.
"""

from gapfill import prefsem
from gapfill.fixtures import goal_expression, ontology, read_text

onto = ontology()

# The taxonomy answers subsumption and propagated disjointness queries.
print("PERSON subsumes EMPLOYEE:", onto.subsumes("PERSON", "EMPLOYEE"))
print("EMPLOYEE disjoint ORGANIZATION:", onto.disjoint("EMPLOYEE", "ORGANIZATION"))

# One relation, five outcomes.
for filler in ("PERSON", "ORGANIZATION", "MACHINE", "ROCK"):
    t = prefsem.RelationTriple("SAY-EVENT", "AGENT", filler)
    print("AGENT <- %-13s tier %.2f" % (filler, prefsem.tier(onto, t)))

# A full expression: instances, roles, and one instance filling three
# roles (reentrancy).
expr = goal_expression()
print(read_text("goal.il").strip())
for triple in prefsem.extract_relations(expr):
    print("  <%s, %s, %s>" % (triple.head, triple.relation, triple.filler))

s = prefsem.score(expr, onto)
print("score:", s.value)

# Ranking candidate interpretations: the sensible reading wins without
# any reading being rejected outright.
candidates = [
    prefsem.parse_interlingua("(e / SAY-EVENT :AGENT (p / PERSON))"),
    prefsem.parse_interlingua("(e / SAY-EVENT :AGENT (o / ORGANIZATION))"),
    prefsem.parse_interlingua("(e / SAY-EVENT :AGENT (r / ROCK))"),
]
for expr, sc in prefsem.rank(candidates, onto):
    print("%8.4f  agent = %s" % (sc.value, list(expr.instances.values())[1]))
