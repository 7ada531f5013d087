"""Andre-Quillen homology of Borel-presented Hopf algebras over the Steenrod algebra."""

__version__ = "0.1.0"
