"""concord: a corpus workbench.

Encode annotated verticalized text into compressed positional and
structural indexes, query it with a CQP-style token-pattern language, and
derive concordances, frequency lists, keywords, and subcorpora — from the
command line, as a library, or over an HTTP/JSON service.
"""

__version__ = "0.1.0"
