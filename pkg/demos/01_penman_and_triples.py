"""Reading and writing AMR graphs in Penman notation, and the triples Smatch counts."""

from mbse import extract_triples, parse_penman, serialize_penman, validate

text = """# ::id demo.1
# ::snt The boy wants to go.
(w / want-01
    :ARG0 (b / boy)
    :ARG1 (g / go-02 :ARG0 b))"""

g = parse_penman(text)
print("root:", g.root)
print("nodes:", g.nodes)
print("edges:", g.edges)  # b is reentrant: ARG0 of both want-01 and go-02
print("metadata:", g.metadata)

# V + E + A + 1 triples; the extra one marks the root
for t in sorted(extract_triples(g)):
    print("  ", t)

# round trip keeps the triple set
again = parse_penman(serialize_penman(g, metadata=True))
assert set(extract_triples(again)) == set(extract_triples(g))
print(serialize_penman(again, metadata=True))

# inverse roles stay as written, quoted names keep their quotes in the graph
city = parse_penman('(c / city :name (n / name :op1 "New" :op2 "York") :location-of (e / event))')
print(city.attributes, city.edges)

# two top-level expressions parse as one graph that fails validation
frag = parse_penman("(a / alpha :ARG0 (b / beta))\n(c / gamma)")
report = validate(frag)
print("connected:", report.connected, report.issues)
