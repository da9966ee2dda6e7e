"""
Permissible walks - directed, attribute-respecting refinements of the s-line
graphs of attributed hypergraphs, with interaction, reachability and trace
analytics on top.
"""

__version__ = "0.1.0"
