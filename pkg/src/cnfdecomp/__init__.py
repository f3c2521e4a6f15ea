"""CNF decompositions of constraint propagators and consistency checkers."""
