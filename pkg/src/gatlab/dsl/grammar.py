"""Lark grammars for the gatlab file formats (grammar version 1).

Each file kind has its own grammar so that keywords of one format stay usable
as identifiers in the others.
"""

GRAMMAR_VERSION = 1

_COMMON = r"""
NAME: /[A-Za-z_][A-Za-z0-9_']*/
STRING: /"(\\.|[^"\\])*"/
INT: /[0-9]+/
COMMENT: /#[^\n]*/
%import common.WS
%ignore WS
%ignore COMMENT

term: NAME [term_args]
term_args: "(" [term ("," term)*] ")"
type: NAME [term_args]
tele: "(" [binding ("," binding)*] ")"
binding: NAME+ ":" type
elem: NAME | STRING | INT
"""

THEORY = _COMMON + r"""
start: "theory" NAME "{" decl* "}"
?decl: sort_decl | op_decl | eq_decl | typeq_decl | pragma_decl
sort_decl: "sort" NAME [tele] ";"
op_decl: "op" NAME [tele] ":" type ";"
eq_decl: "eq" [NAME] [tele] ":" term "==" term ":" type ";"
typeq_decl: "typeq" [NAME] [tele] ":" type "==" type ";"
pragma_decl: "pragma" NAME+ ";"
"""

FORMULA = _COMMON + r"""
start: formula_def*
formula_def: "formula" NAME "in" tele ":=" fbody ";"
?fbody: "forall" tele "." fbody   -> f_forall
      | "exists" tele "." fbody   -> f_exists
      | "and" "(" [fbody ("," fbody)*] ")" -> f_and
      | "or" "(" [fbody ("," fbody)*] ")"  -> f_or
      | "not" "(" fbody ")"                -> f_not
      | "implies" "(" fbody "," fbody ")"  -> f_implies
      | "true"                             -> f_true
      | "false"                            -> f_false
      | term "=" term                      -> f_equal
      | "(" fbody ")"
"""

MODEL = _COMMON + r"""
start: "model" NAME "of" STRING "{" mentry* "}"
?mentry: "sort" NAME [index] "=" "{" [elem ("," elem)*] "}" ";" -> m_fiber
       | "op" NAME [elem_args] "=" elem ";"                    -> m_op
index: "[" [elem ("," elem)*] "]"
elem_args: "(" [elem ("," elem)*] ")"
"""

HOM = _COMMON + r"""
start: "hom" NAME "from" STRING "to" STRING "{" hmap* "}"
hmap: "map" NAME [index] elem "->" elem ";"
index: "[" [elem ("," elem)*] "]"
"""

CATEGORY = _COMMON + r"""
start: category*
category: "category" NAME "{" centry* "}"
?centry: "objects" [elem ("," elem)*] ";"   -> c_objects
       | "arrow" elem ":" elem "->" elem ";" -> c_arrow
       | "identity" elem "=" elem ";"        -> c_identity
       | "comp" elem "," elem "=" elem ";"   -> c_comp
"""

FUNCTOR = _COMMON + r"""
start: "functor" NAME "from" STRING "to" STRING "{" fentry* "}"
?fentry: "ob" elem "->" elem ";"  -> f_ob
       | "arr" elem "->" elem ";" -> f_arr
"""

SEXPR = r"""
start: sexpr*
?sexpr: atom | slist
slist: "(" sexpr* ")"
atom: SYMBOL | STRING
SYMBOL: /[^\s()";]+/
STRING: /"(\\.|[^"\\])*"/
COMMENT: /;[^\n]*/
%import common.WS
%ignore WS
%ignore COMMENT
"""

KEYWORDS = {
    "theory": {"theory", "sort", "op", "eq", "typeq", "pragma"},
    "formula": {"formula", "in", "forall", "exists", "and", "or", "not", "implies", "true", "false"},
    "model": {"model", "of", "sort", "op"},
    "hom": {"hom", "from", "to", "map"},
    "category": {"category", "objects", "arrow", "identity", "comp"},
    "functor": {"functor", "from", "to", "ob", "arr"},
}
