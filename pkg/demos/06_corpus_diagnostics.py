"""Corpus counts and the named-entity type out-of-vocabulary ratio."""

from mbse import parse_penman
from mbse.pipeline import NoNamedEntitiesError, corpus_stats, ne_type_oov

ne = '(x / {} :name (n / name :op1 "{}"))'
train = [
    parse_penman("# ::snt Paris is big\n" + ne.format("city", "Paris")),
    parse_penman("# ::snt Ann left\n" + ne.format("person", "Ann")),
]
test = [
    parse_penman("# ::snt Lyon\n" + ne.format("city", "Lyon")),
    parse_penman("# ::snt the Rhine\n" + ne.format("river", "Rhine")),
    parse_penman("# ::snt Acme Corp\n" + ne.format("company", "Acme")),
]

print("train:", corpus_stats(train))
print("test:", corpus_stats(test))

res = ne_type_oov(train, test)
print(f"NE type OOV {res.ratio:.3f}, unseen types {res.missing_types}")

# adding silver data that covers the unseen types lowers the ratio
silver = [parse_penman(ne.format("river", "Seine"))]
print(f"with silver: {ne_type_oov(train + silver, test).ratio:.3f}")

try:
    ne_type_oov(train, [parse_penman("(b / boy)")])
except NoNamedEntitiesError as exc:
    print("undefined:", exc)
