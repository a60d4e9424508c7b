# Clique-width expressions: AST, grammar, quotients, generator
