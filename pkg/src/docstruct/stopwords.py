"""Built-in list of common English stopwords.

Used as the default exclusion list when building the header-word
vocabulary and when tokenizing sections for topic modeling, so the
package needs no external corpus download.
"""

STOPWORDS = frozenset("""
a about above after again against all also am an and any are as at be
because been before being below between both but by can cannot could did
do does doing down during each few for from further had has have having
he her here hers herself him himself his how i if in into is it its
itself just like me more most my myself no nor not now of off on once
only or other our ours ourselves out over own same she should so some
such than that the their theirs them themselves then there these they
this those through to too under until up upon very was we were what when
where which while who whom why will with would you your yours yourself
yourselves
""".split())
