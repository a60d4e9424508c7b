# cw3-iso: graph isomorphism for clique-width at most three
