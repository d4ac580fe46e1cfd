"""Connected components over adjacency maps.

Erasure asks for components many thousands of times on graphs of a few dozen
vertices; a flood fill over plain dicts is much cheaper there than building
a graph object each time.
"""


def components(vertices, adj):
    """Connected components of the graph ``adj`` restricted to ``vertices``.

    ``adj`` maps a vertex to an iterable of neighbours; neighbours outside
    ``vertices`` are ignored.  Components come out in order of their first
    vertex in ``vertices``.
    """
    vertices = list(vertices)
    allowed = set(vertices)
    seen = set()
    out = []
    for v in vertices:
        if v in seen:
            continue
        seen.add(v)
        comp = [v]
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj.get(u, ()):
                if w in allowed and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        out.append(comp)
    return out


def is_connected(vertices, adj):
    vertices = list(vertices)
    return len(vertices) > 0 and len(components(vertices, adj)) == 1


def undirected(edges):
    """Adjacency dict from an iterable of vertex pairs."""
    adj = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    return adj
