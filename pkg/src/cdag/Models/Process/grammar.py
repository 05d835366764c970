"""
Process notation grammar.

A process string names the incoming particles, an arrow and the outgoing
particles, e.g. `"e- gamma -> e- gamma"`. A particle may carry a count, either
as a prefix (`2gamma`) or as a power (`gamma^2`, `B^3`). The count `N` (or `n`)
is a placeholder filled in from the command line.

Grammar is defined using the PEG parsing library `parsimonious`:

```
tree = grammar.parse("e- Ngamma -> e- gamma")
print(tree.prettily())
```
"""

from parsimonious import Grammar

grammar = Grammar(
    r"""
    root = ws? side ws? arrow ws? side ws?

    ##
    # A side is a white-space separated list of particles
    side = particle (ws particle)*
    particle = multiplicity? name power?

    ##
    # Counts
    multiplicity = pos_integer / prefix_placeholder
    prefix_placeholder = placeholder &letter
    power = '^' (pos_integer / placeholder)

    ##
    # Primitives
    name = ~"[A-Za-z]+([+]|-(?!>))?"
    letter = ~"[A-Za-z]"
    placeholder = ~"[Nn]"
    pos_integer = ~"[0-9]+"
    arrow = '->'
    ws = ~"\s+"
    """
)
