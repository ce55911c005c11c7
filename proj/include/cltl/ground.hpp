/*!
  \file ground.hpp
  \brief Grounding of constraint programs over a bounded universe of node slots

  A set is a vector of n membership expressions, a relation an n-by-n matrix
  (row-major). Membership is expressed over the structural variables of the
  encoding: `used`, `label`, `childL`, `childR` and the node constants.
*/

#pragma once

#include "bool_expr.hpp"
#include "constraint/ast.hpp"

#include <cmath>
#include <stdexcept>

namespace cltl
{

/*! \brief Structural variables of a bounded syntax DAG, as expressions. */
struct symbolic_universe
{
  std::size_t n = 0;
  std::size_t num_props = 0;
  std::vector<bexpr> used;                 /* [i] */
  std::vector<std::vector<bexpr>> labels;  /* [i][label index] */
  std::vector<std::vector<bexpr>> child_l; /* [i][j], false unless j < i */
  std::vector<std::vector<bexpr>> child_r;
  std::vector<std::vector<bexpr>> consts;  /* [declared node][i] */

  std::size_t num_labels() const noexcept { return num_operators + num_props; }
  bexpr is_used( std::size_t i ) const { return i < n ? used[i] : bfalse; }
};

struct symbolic_value
{
  int arity = 0; /* 0: the empty set, compatible with both arities */
  std::vector<bexpr> cells;
};

/*! \brief Soft literals of one objective: each expression should hold; `offset` counts cells that are violated regardless. */
struct grounded_objective
{
  uint32_t priority = 1;
  std::vector<bexpr> soft;
  int64_t offset = 0;
};

namespace detail
{

using namespace constraint;

class grounder
{
public:
  grounder( program const& p, symbolic_universe const& u, bool_builder& b ) : p_( p ), u_( u ), b_( b ), n_( u.n ) {}

  using env = std::vector<std::pair<std::string, symbolic_value>>;

  symbolic_value singleton( std::size_t i ) const
  {
    symbolic_value v{ 1, std::vector<bexpr>( n_, bfalse ) };
    v.cells[i] = btrue;
    return v;
  }

  symbolic_value ground( expr const& e, env& en )
  {
    switch ( e.kind )
    {
    case expr_kind::name: return name( e, en );
    case expr_kind::labels:
    {
      symbolic_value v{ 1, std::vector<bexpr>( n_, bfalse ) };
      for ( std::size_t i = 0; i < n_; ++i )
      {
        std::vector<bexpr> any;
        for ( auto const& l : e.labels )
          any.push_back( u_.labels[i][l.index()] );
        v.cells[i] = b_.land( u_.used[i], b_.lor_all( any ) );
      }
      return v;
    }
    case expr_kind::empty: return {};
    case expr_kind::pairs:
    {
      symbolic_value v = empty_rel();
      for ( std::size_t k = 0; k + 1 < e.args.size(); k += 2 )
      {
        auto const a = ground( *e.args[k], en );
        auto const c = ground( *e.args[k + 1], en );
        if ( !a.arity || !c.arity )
          continue;
        for ( std::size_t i = 0; i < n_; ++i )
          for ( std::size_t j = 0; j < n_; ++j )
            v.cells[i * n_ + j] = b_.lor( v.cells[i * n_ + j], b_.land( a.cells[i], c.cells[j] ) );
      }
      return v;
    }
    case expr_kind::comprehension:
    {
      if ( e.vars.size() == 1 )
      {
        symbolic_value v{ 1, std::vector<bexpr>( n_, bfalse ) };
        for ( std::size_t i = 0; i < n_; ++i )
        {
          en.emplace_back( e.vars[0], singleton( i ) );
          v.cells[i] = b_.land( u_.used[i], formula( *e.body, en ) );
          en.pop_back();
        }
        return v;
      }
      symbolic_value v = empty_rel();
      for ( std::size_t i = 0; i < n_; ++i )
        for ( std::size_t j = 0; j < n_; ++j )
        {
          en.emplace_back( e.vars[0], singleton( i ) );
          en.emplace_back( e.vars[1], singleton( j ) );
          v.cells[i * n_ + j] = b_.land( b_.land( u_.used[i], u_.used[j] ), formula( *e.body, en ) );
          en.resize( en.size() - 2 );
        }
      return v;
    }
    case expr_kind::union_:
    case expr_kind::intersect:
    case expr_kind::diff:
    {
      auto a = ground( *e.args[0], en );
      auto c = ground( *e.args[1], en );
      widen( a, c.arity );
      widen( c, a.arity );
      for ( std::size_t i = 0; i < a.cells.size(); ++i )
        a.cells[i] = e.kind == expr_kind::union_       ? b_.lor( a.cells[i], c.cells[i] )
                     : e.kind == expr_kind::intersect ? b_.land( a.cells[i], c.cells[i] )
                                                      : b_.land( a.cells[i], !c.cells[i] );
      return a;
    }
    case expr_kind::product:
    {
      auto const a = ground( *e.args[0], en );
      auto const c = ground( *e.args[1], en );
      symbolic_value v = empty_rel();
      if ( !a.arity || !c.arity )
        return v;
      for ( std::size_t i = 0; i < n_; ++i )
        for ( std::size_t j = 0; j < n_; ++j )
          v.cells[i * n_ + j] = b_.land( a.cells[i], c.cells[j] );
      return v;
    }
    case expr_kind::join: return join( ground( *e.args[0], en ), ground( *e.args[1], en ) );
    case expr_kind::closure: return closure( ground( *e.args[0], en ) );
    case expr_kind::refl_closure:
    {
      auto v = closure( ground( *e.args[0], en ) );
      for ( std::size_t i = 0; i < n_; ++i )
        v.cells[i * n_ + i] = b_.lor( v.cells[i * n_ + i], u_.used[i] );
      return v;
    }
    case expr_kind::inverse:
    {
      auto const a = ground( *e.args[0], en );
      if ( !a.arity )
        return a;
      symbolic_value v = empty_rel();
      for ( std::size_t i = 0; i < n_; ++i )
        for ( std::size_t j = 0; j < n_; ++j )
          v.cells[j * n_ + i] = a.cells[i * n_ + j];
      return v;
    }
    case expr_kind::call: return call( e, en );
    }
    return {};
  }

  bexpr formula( form const& f, env& en )
  {
    switch ( f.kind )
    {
    case form_kind::truth: return bool_builder::constant( f.value );
    case form_kind::in:
    case form_kind::equal:
    case form_kind::not_equal:
    {
      auto a = ground( *f.lhs, en );
      auto c = ground( *f.rhs, en );
      widen( a, c.arity );
      widen( c, a.arity );
      std::vector<bexpr> parts;
      for ( std::size_t i = 0; i < a.cells.size(); ++i )
        parts.push_back( f.kind == form_kind::in ? b_.implies( a.cells[i], c.cells[i] ) : b_.iff( a.cells[i], c.cells[i] ) );
      auto const all = b_.land_all( parts );
      return f.kind == form_kind::not_equal ? !all : all;
    }
    case form_kind::card: return cardinality( ground( *f.lhs, en ).cells, f.cmp, f.number );
    case form_kind::not_: return !formula( *f.a, en );
    case form_kind::and_: return b_.land( formula( *f.a, en ), formula( *f.b, en ) );
    case form_kind::or_: return b_.lor( formula( *f.a, en ), formula( *f.b, en ) );
    case form_kind::implies: return b_.implies( formula( *f.a, en ), formula( *f.b, en ) );
    case form_kind::iff: return b_.iff( formula( *f.a, en ), formula( *f.b, en ) );
    case form_kind::forall:
    case form_kind::exists:
    {
      bool const all = f.kind == form_kind::forall;
      auto const dom = ground( *f.domain, en );
      std::vector<bexpr> parts;
      for ( std::size_t c = 0; c < dom.cells.size(); ++c )
      {
        if ( dom.cells[c].is_false() )
          continue;
        if ( f.vars.size() == 1 )
          en.emplace_back( f.vars[0], singleton( c ) );
        else
        {
          en.emplace_back( f.vars[0], singleton( c / n_ ) );
          en.emplace_back( f.vars[1], singleton( c % n_ ) );
        }
        auto const body = formula( *f.a, en );
        en.resize( en.size() - f.vars.size() );
        parts.push_back( all ? b_.implies( dom.cells[c], body ) : b_.land( dom.cells[c], body ) );
      }
      return all ? b_.land_all( parts ) : b_.lor_all( parts );
    }
    }
    return bfalse;
  }

  /*! \brief at_least[k] for k = 0..limit over the given cells (sequential counter). */
  std::vector<bexpr> at_least( std::vector<bexpr> const& xs, std::size_t limit )
  {
    std::vector<bexpr> c( limit + 1, bfalse );
    c[0] = btrue;
    for ( auto const& x : xs )
    {
      if ( x.is_false() )
        continue;
      for ( std::size_t j = limit; j >= 1; --j )
        c[j] = b_.lor( c[j], b_.land( x, c[j - 1] ) );
    }
    return c;
  }

  bexpr cardinality( std::vector<bexpr> const& xs, cmp_op cmp, int64_t k )
  {
    auto const size = static_cast<int64_t>( xs.size() );
    auto const limit = static_cast<std::size_t>( std::clamp<int64_t>( k + 1, 0, size + 1 ) );
    auto const c = at_least( xs, limit );
    auto ge = [&]( int64_t m ) -> bexpr {
      if ( m <= 0 )
        return btrue;
      if ( m > size || static_cast<std::size_t>( m ) > limit )
        return bfalse;
      return c[static_cast<std::size_t>( m )];
    };
    switch ( cmp )
    {
    case cmp_op::ge: return ge( k );
    case cmp_op::gt: return ge( k + 1 );
    case cmp_op::le: return !ge( k + 1 );
    case cmp_op::lt: return !ge( k );
    case cmp_op::eq: return b_.land( ge( k ), !ge( k + 1 ) );
    case cmp_op::ne: return !b_.land( ge( k ), !ge( k + 1 ) );
    }
    return bfalse;
  }

  grounded_objective objective( constraint::objective const& o )
  {
    grounded_objective g;
    g.priority = o.priority;
    auto add = [&]( bexpr want ) {
      if ( want.is_true() )
        return;
      if ( want.is_false() )
        ++g.offset;
      else
        g.soft.push_back( want );
    };
    if ( o.kind == objective_kind::soft )
    {
      env en;
      add( formula( *o.fact, en ) );
      return g;
    }
    env en;
    auto v = ground( *o.target, en );
    if ( o.kind == objective_kind::maximize )
    {
      widen( v, v.arity ? v.arity : 1 );
      for ( auto const& c : v.cells )
        add( c );
    }
    else
      for ( auto const& c : v.cells )
        add( !c );
    return g;
  }

private:
  symbolic_value empty_rel() const { return { 2, std::vector<bexpr>( n_ * n_, bfalse ) }; }

  void widen( symbolic_value& v, int arity ) const
  {
    if ( v.arity || !arity )
      return;
    v.arity = arity;
    v.cells.assign( arity == 1 ? n_ : n_ * n_, bfalse );
  }

  symbolic_value name( expr const& e, env& en )
  {
    switch ( e.resolved )
    {
    case name_kind::variable:
      for ( auto it = en.rbegin(); it != en.rend(); ++it )
        if ( it->first == e.name )
          return it->second;
      throw std::logic_error( "unbound variable " + e.name );
    case name_kind::node_const:
      return { 1, u_.consts.at( *p_.find_node( e.name ) ) };
    case name_kind::rel_def:
    {
      env inner;
      return ground( *p_.find_rel( e.name )->value, inner );
    }
    case name_kind::prop:
    {
      symbolic_value v{ 1, std::vector<bexpr>( n_ ) };
      for ( std::size_t i = 0; i < n_; ++i )
        v.cells[i] = b_.land( u_.used[i], u_.labels[i][label::of_prop( e.prop ).index()] );
      return v;
    }
    case name_kind::builtin: return builtin_value( e.which );
    case name_kind::unresolved: break;
    }
    throw std::logic_error( "unresolved name " + e.name );
  }

  symbolic_value builtin_value( builtin which )
  {
    symbolic_value v{ 1, std::vector<bexpr>( n_, bfalse ) };
    switch ( which )
    {
    case builtin::root:
      for ( std::size_t i = 0; i < n_; ++i )
        v.cells[i] = b_.land( u_.used[i], !u_.is_used( i + 1 ) );
      break;
    case builtin::nodes: v.cells = u_.used; break;
    case builtin::left:
    case builtin::right:
      v = empty_rel();
      for ( std::size_t i = 0; i < n_; ++i )
        for ( std::size_t j = 0; j < n_; ++j )
          v.cells[i * n_ + j] = ( which == builtin::left ? u_.child_l : u_.child_r )[i][j];
      break;
    case builtin::ap:
    case builtin::temporal:
      for ( std::size_t i = 0; i < n_; ++i )
      {
        std::vector<bexpr> any;
        if ( which == builtin::ap )
          for ( std::size_t p = 0; p < u_.num_props; ++p )
            any.push_back( u_.labels[i][num_operators + p] );
        else
          for ( auto o : { op::globally, op::finally, op::until, op::next } )
            any.push_back( u_.labels[i][label::of_op( o ).index()] );
        v.cells[i] = b_.land( u_.used[i], b_.lor_all( any ) );
      }
      break;
    }
    return v;
  }

  symbolic_value join( symbolic_value const& a, symbolic_value const& c )
  {
    if ( !a.arity || !c.arity )
      return {};
    std::vector<bexpr> terms;
    if ( a.arity == 1 && c.arity == 2 )
    {
      symbolic_value v{ 1, std::vector<bexpr>( n_ ) };
      for ( std::size_t j = 0; j < n_; ++j )
      {
        terms.clear();
        for ( std::size_t i = 0; i < n_; ++i )
          terms.push_back( b_.land( a.cells[i], c.cells[i * n_ + j] ) );
        v.cells[j] = b_.lor_all( terms );
      }
      return v;
    }
    if ( a.arity == 2 && c.arity == 1 )
    {
      symbolic_value v{ 1, std::vector<bexpr>( n_ ) };
      for ( std::size_t i = 0; i < n_; ++i )
      {
        terms.clear();
        for ( std::size_t j = 0; j < n_; ++j )
          terms.push_back( b_.land( a.cells[i * n_ + j], c.cells[j] ) );
        v.cells[i] = b_.lor_all( terms );
      }
      return v;
    }
    symbolic_value v = empty_rel();
    for ( std::size_t i = 0; i < n_; ++i )
      for ( std::size_t k = 0; k < n_; ++k )
      {
        terms.clear();
        for ( std::size_t j = 0; j < n_; ++j )
          terms.push_back( b_.land( a.cells[i * n_ + j], c.cells[j * n_ + k] ) );
        v.cells[i * n_ + k] = b_.lor_all( terms );
      }
    return v;
  }

  symbolic_value closure( symbolic_value r )
  {
    if ( !r.arity )
      return empty_rel();
    /* after k squarings r covers paths of length up to 2^k */
    auto const rounds = n_ <= 1 ? 1 : static_cast<std::size_t>( std::ceil( std::log2( double( n_ ) ) ) ) + 1;
    for ( std::size_t k = 0; k < rounds; ++k )
    {
      auto const sq = join( r, r );
      bool changed = false;
      for ( std::size_t i = 0; i < r.cells.size(); ++i )
      {
        auto const next = b_.lor( r.cells[i], sq.cells[i] );
        changed = changed || next != r.cells[i];
        r.cells[i] = next;
      }
      if ( !changed )
        break;
    }
    return r;
  }

  symbolic_value call( expr const& e, env& en )
  {
    auto arg = ground( *e.args[0], en );
    if ( e.name == "l" || e.name == "r" )
      return join( arg, builtin_value( e.name == "l" ? builtin::left : builtin::right ) );
    if ( e.name == "desc" || e.name == "subNodes" )
    {
      auto edges = builtin_value( builtin::left );
      auto const r = builtin_value( builtin::right );
      for ( std::size_t i = 0; i < edges.cells.size(); ++i )
        edges.cells[i] = b_.lor( edges.cells[i], r.cells[i] );
      auto c = closure( edges );
      if ( e.name == "subNodes" )
        for ( std::size_t i = 0; i < n_; ++i )
          c.cells[i * n_ + i] = b_.lor( c.cells[i * n_ + i], u_.used[i] );
      return join( arg, c );
    }
    auto const* f = p_.find_func( e.name );
    env inner{ { f->param, std::move( arg ) } };
    return ground( *f->body, inner );
  }

  program const& p_;
  symbolic_universe const& u_;
  bool_builder& b_;
  std::size_t n_;
};

} // namespace detail

/*! \brief Membership expressions of a closed expression (or one whose variables are bound to slots). */
inline symbolic_value ground_expr( constraint::program const& p, constraint::expr const& e, symbolic_universe const& u,
                                   bool_builder& b, std::vector<std::pair<std::string, std::size_t>> const& binding = {} )
{
  detail::grounder g( p, u, b );
  detail::grounder::env en;
  for ( auto const& [name, slot] : binding )
    en.emplace_back( name, g.singleton( slot ) );
  return g.ground( e, en );
}

inline bexpr ground_formula( constraint::program const& p, constraint::form const& f, symbolic_universe const& u,
                             bool_builder& b, std::vector<std::pair<std::string, std::size_t>> const& binding = {} )
{
  detail::grounder g( p, u, b );
  detail::grounder::env en;
  for ( auto const& [name, slot] : binding )
    en.emplace_back( name, g.singleton( slot ) );
  return g.formula( f, en );
}

/*! \brief Conjunction of all hard constraints of the program. */
inline bexpr ground_constraints( constraint::program const& p, symbolic_universe const& u, bool_builder& b )
{
  detail::grounder g( p, u, b );
  bexpr all = btrue;
  for ( auto const& c : p.constraints )
  {
    detail::grounder::env en;
    all = b.land( all, g.formula( *c, en ) );
  }
  return all;
}

inline grounded_objective ground_objective( constraint::program const& p, constraint::objective const& o,
                                            symbolic_universe const& u, bool_builder& b )
{
  return detail::grounder( p, u, b ).objective( o );
}

/*! \brief Expressions for "at least k of xs" for k = 0..limit. */
inline std::vector<bexpr> ground_at_least( std::vector<bexpr> const& xs, std::size_t limit, bool_builder& b )
{
  constraint::program const none;
  symbolic_universe const u;
  return detail::grounder( none, u, b ).at_least( xs, limit );
}

} // namespace cltl
