# Structural isomorphism and the isomorphism engine
