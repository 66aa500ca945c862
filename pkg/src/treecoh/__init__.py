"""treecoh: exact computations for graphs of groups and their
fundamental groups -- Bass-Serre covers, Britton-style normal forms,
the Haagerup cocycle, Mayer-Vietoris cohomology in degrees 0 and 1,
first L2-Betti numbers, and the fixed-space calculus of boundary
representations."""

__version__ = "0.1.0"
