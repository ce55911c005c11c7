/*!
  \file ast.hpp
  \brief Syntax trees for structural constraints and objectives, plus the unparser
*/

#pragma once

#include "../ltl.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cltl::constraint
{

struct expr;
struct form;
using expr_ptr = std::shared_ptr<expr const>;
using form_ptr = std::shared_ptr<form const>;

struct source_pos
{
  std::size_t line = 0;
  std::size_t column = 0;
};

enum class builtin
{
  root,
  nodes,
  left,
  right,
  ap,
  temporal,
};

enum class name_kind
{
  unresolved,
  variable, /* quantifier, comprehension or function parameter */
  node_const,
  rel_def,
  builtin,
  prop,
};

enum class expr_kind
{
  name,
  labels,       /* N[...] */
  empty,        /* {} or none */
  pairs,        /* {(a, b), ...}: union of products of the operands taken two at a time */
  comprehension,
  union_,
  intersect,
  diff,
  product,
  join,
  closure,
  refl_closure,
  inverse,
  call,
};

struct expr
{
  expr_kind kind = expr_kind::empty;
  source_pos pos;

  /* name, call */
  std::string name;
  name_kind resolved = name_kind::unresolved;
  builtin which = builtin::root;
  uint32_t prop = 0;

  /* labels: the spelled items (for printing) and what they denote */
  std::vector<std::string> label_text;
  std::vector<label> labels;

  /* comprehension: one or two bound names */
  std::vector<std::string> vars;
  form_ptr body;

  /* operands: binary ops use two, unary and call use one, pairs use 2k */
  std::vector<expr_ptr> args;
};

enum class cmp_op
{
  eq,
  ne,
  lt,
  le,
  gt,
  ge,
};

enum class card_sugar
{
  none, /* #E op n */
  no,
  one,
  lone,
  some,
};

enum class form_kind
{
  truth,
  in,
  equal,
  not_equal,
  card,
  not_,
  and_,
  or_,
  implies,
  iff,
  forall,
  exists,
};

struct form
{
  form_kind kind = form_kind::truth;
  source_pos pos;
  bool value = true; /* truth */

  expr_ptr lhs, rhs; /* in, equal, not_equal; card uses lhs */
  cmp_op cmp = cmp_op::eq;
  int64_t number = 0;
  card_sugar sugar = card_sugar::none;

  form_ptr a, b; /* connectives; quantifiers use a as the body */

  /* quantifiers: one name, or two for a tuple binder over a relation */
  std::vector<std::string> vars;
  expr_ptr domain;
};

struct func_def
{
  std::string name;
  std::string param;
  expr_ptr body;
  source_pos pos;
};

struct node_decl
{
  std::string name;
  expr_ptr domain;
  source_pos pos;
};

struct rel_def
{
  std::string name;
  expr_ptr value;
  source_pos pos;
};

enum class objective_kind
{
  minimize,
  maximize,
  softempty,
  soft,
};

struct objective
{
  objective_kind kind = objective_kind::softempty;
  uint32_t priority = 1;
  expr_ptr target;  /* minimize, maximize, softempty */
  form_ptr fact;    /* soft */
  bool implicit = false; /* added by the tool rather than written by the user */
};

struct program
{
  std::vector<func_def> funcs;
  std::vector<node_decl> nodes;
  std::vector<rel_def> rels;
  std::vector<form_ptr> constraints;
  std::vector<objective> objectives;

  func_def const* find_func( std::string_view n ) const
  {
    for ( auto const& f : funcs )
      if ( f.name == n )
        return &f;
    return nullptr;
  }

  rel_def const* find_rel( std::string_view n ) const
  {
    for ( auto const& r : rels )
      if ( r.name == n )
        return &r;
    return nullptr;
  }

  std::optional<std::size_t> find_node( std::string_view n ) const
  {
    for ( std::size_t i = 0; i < nodes.size(); ++i )
      if ( nodes[i].name == n )
        return i;
    return std::nullopt;
  }

  /*! \brief Distinct priorities, highest first. */
  std::vector<uint32_t> priorities() const
  {
    std::vector<uint32_t> out;
    for ( auto const& o : objectives )
      if ( std::find( out.begin(), out.end(), o.priority ) == out.end() )
        out.push_back( o.priority );
    std::sort( out.rbegin(), out.rend() );
    return out;
  }
};

inline std::string_view builtin_name( builtin b )
{
  switch ( b )
  {
  case builtin::root: return "root";
  case builtin::nodes: return "Nodes";
  case builtin::left: return "L";
  case builtin::right: return "R";
  case builtin::ap: return "AP";
  case builtin::temporal: return "Temporal";
  }
  return "?";
}

inline std::string_view cmp_symbol( cmp_op c )
{
  switch ( c )
  {
  case cmp_op::eq: return "=";
  case cmp_op::ne: return "!=";
  case cmp_op::lt: return "<";
  case cmp_op::le: return "<=";
  case cmp_op::gt: return ">";
  case cmp_op::ge: return ">=";
  }
  return "?";
}

inline bool compare( int64_t lhs, cmp_op c, int64_t rhs )
{
  switch ( c )
  {
  case cmp_op::eq: return lhs == rhs;
  case cmp_op::ne: return lhs != rhs;
  case cmp_op::lt: return lhs < rhs;
  case cmp_op::le: return lhs <= rhs;
  case cmp_op::gt: return lhs > rhs;
  case cmp_op::ge: return lhs >= rhs;
  }
  return false;
}

/* ---- unparsing ---- */

namespace detail
{

inline int expr_level( expr const& e )
{
  switch ( e.kind )
  {
  case expr_kind::union_:
  case expr_kind::diff: return 0;
  case expr_kind::intersect: return 1;
  case expr_kind::product: return 2;
  case expr_kind::join: return 3;
  case expr_kind::closure:
  case expr_kind::refl_closure:
  case expr_kind::inverse: return 4;
  default: return 5;
  }
}

inline void unparse_form( form const& f, std::string& out );

inline void unparse_expr( expr const& e, std::string& out )
{
  auto sub = [&]( expr const& s, bool paren ) {
    if ( paren )
      out += "(";
    unparse_expr( s, out );
    if ( paren )
      out += ")";
  };
  auto const lvl = expr_level( e );
  switch ( e.kind )
  {
  case expr_kind::name: out += e.name; return;
  case expr_kind::empty: out += "{}"; return;
  case expr_kind::labels:
    out += "N[";
    for ( std::size_t i = 0; i < e.label_text.size(); ++i )
      out += ( i ? ", " : "" ) + e.label_text[i];
    out += "]";
    return;
  case expr_kind::pairs:
    out += "{";
    for ( std::size_t i = 0; i + 1 < e.args.size(); i += 2 )
    {
      out += i ? ", (" : "(";
      unparse_expr( *e.args[i], out );
      out += ", ";
      unparse_expr( *e.args[i + 1], out );
      out += ")";
    }
    out += "}";
    return;
  case expr_kind::comprehension:
    out += "{";
    if ( e.vars.size() == 1 )
      out += e.vars[0];
    else
      out += "(" + e.vars[0] + ", " + e.vars[1] + ")";
    out += " | ";
    unparse_form( *e.body, out );
    out += "}";
    return;
  case expr_kind::call:
    out += e.name + "(";
    unparse_expr( *e.args[0], out );
    out += ")";
    return;
  case expr_kind::closure:
  case expr_kind::refl_closure:
  case expr_kind::inverse:
    out += e.kind == expr_kind::closure ? "^" : e.kind == expr_kind::refl_closure ? "*" : "~";
    sub( *e.args[0], expr_level( *e.args[0] ) < lvl );
    return;
  default: break;
  }
  char const* sym = "";
  switch ( e.kind )
  {
  case expr_kind::union_: sym = " + "; break;
  case expr_kind::diff: sym = " \\ "; break;
  case expr_kind::intersect: sym = " & "; break;
  case expr_kind::product: sym = " >< "; break;
  case expr_kind::join: sym = "."; break;
  default: break;
  }
  sub( *e.args[0], expr_level( *e.args[0] ) < lvl );
  out += sym;
  sub( *e.args[1], expr_level( *e.args[1] ) <= lvl );
}

inline int form_level( form const& f )
{
  switch ( f.kind )
  {
  case form_kind::iff: return 0;
  case form_kind::implies: return 1;
  case form_kind::or_: return 2;
  case form_kind::and_: return 3;
  case form_kind::forall:
  case form_kind::exists: return -1;
  default: return 4;
  }
}

inline void unparse_form( form const& f, std::string& out )
{
  /* quantifier bodies extend to the right, so quantifiers under a binary connective get parentheses */
  auto sub = [&]( form const& s, bool paren ) {
    paren = paren || form_level( s ) < 0;
    if ( paren )
      out += "(";
    unparse_form( s, out );
    if ( paren )
      out += ")";
  };
  auto const lvl = form_level( f );
  switch ( f.kind )
  {
  case form_kind::truth: out += f.value ? "true" : "false"; return;
  case form_kind::in:
  case form_kind::equal:
  case form_kind::not_equal:
    unparse_expr( *f.lhs, out );
    out += f.kind == form_kind::in ? " in " : f.kind == form_kind::equal ? " = " : " != ";
    unparse_expr( *f.rhs, out );
    return;
  case form_kind::card:
    switch ( f.sugar )
    {
    case card_sugar::no: out += "no "; break;
    case card_sugar::one: out += "one "; break;
    case card_sugar::lone: out += "lone "; break;
    case card_sugar::some: out += "some "; break;
    case card_sugar::none: out += "#"; break;
    }
    {
      /* a bare name or parenthesized operand keeps `#` adjacent and unambiguous */
      bool const paren = f.sugar == card_sugar::none && expr_level( *f.lhs ) < 5;
      if ( paren )
        out += "(";
      unparse_expr( *f.lhs, out );
      if ( paren )
        out += ")";
    }
    if ( f.sugar == card_sugar::none )
      out += " " + std::string( cmp_symbol( f.cmp ) ) + " " + std::to_string( f.number );
    return;
  case form_kind::not_:
    out += "not ";
    sub( *f.a, form_level( *f.a ) < 4 && form_level( *f.a ) >= 0 );
    return;
  case form_kind::forall:
  case form_kind::exists:
    out += f.kind == form_kind::forall ? "all " : "some ";
    if ( f.vars.size() == 1 )
      out += f.vars[0];
    else
      out += "(" + f.vars[0] + ", " + f.vars[1] + ")";
    out += " in ";
    unparse_expr( *f.domain, out );
    out += " : ";
    unparse_form( *f.a, out );
    return;
  default: break;
  }
  char const* sym = "";
  switch ( f.kind )
  {
  case form_kind::iff: sym = " <=> "; break;
  case form_kind::implies: sym = " => "; break;
  case form_kind::or_: sym = " or "; break;
  case form_kind::and_: sym = " and "; break;
  default: break;
  }
  bool const right_assoc = f.kind == form_kind::implies;
  sub( *f.a, right_assoc ? form_level( *f.a ) <= lvl : form_level( *f.a ) < lvl );
  out += sym;
  sub( *f.b, right_assoc ? form_level( *f.b ) < lvl : form_level( *f.b ) <= lvl );
}

} // namespace detail

inline std::string unparse( expr const& e )
{
  std::string out;
  detail::unparse_expr( e, out );
  return out;
}

inline std::string unparse( form const& f )
{
  std::string out;
  detail::unparse_form( f, out );
  return out;
}

inline std::string unparse( objective const& o )
{
  std::string out;
  switch ( o.kind )
  {
  case objective_kind::minimize: out = "minimize"; break;
  case objective_kind::maximize: out = "maximize"; break;
  case objective_kind::softempty: out = "softempty"; break;
  case objective_kind::soft: out = "soft"; break;
  }
  out += "[" + std::to_string( o.priority ) + "] ";
  out += o.kind == objective_kind::soft ? unparse( *o.fact ) : unparse( *o.target );
  return out + ";";
}

/*! \brief Program text that parses back to the same program (implicit objectives are left out). */
inline std::string unparse( program const& p )
{
  std::string out;
  for ( auto const& n : p.nodes )
    out += "node " + n.name + " : " + unparse( *n.domain ) + ";\n";
  for ( auto const& f : p.funcs )
    out += "func " + f.name + "(" + f.param + ") = " + unparse( *f.body ) + ";\n";
  for ( auto const& r : p.rels )
    out += "rel " + r.name + " = " + unparse( *r.value ) + ";\n";
  for ( auto const& c : p.constraints )
    out += "constraint " + unparse( *c ) + ";\n";
  for ( auto const& o : p.objectives )
    if ( !o.implicit )
      out += unparse( o ) + "\n";
  return out;
}

} // namespace cltl::constraint
