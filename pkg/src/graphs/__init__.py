# Graph representation, primitives and file formats
