/*!
  \file eval.hpp
  \brief Direct set-based evaluation of constraint programs on a concrete syntax DAG

  The universe is the set of nodes reachable from the root. Declared node
  constants need a witness: one distinct node per declaration, taken from its
  domain. This evaluator shares no code with the grounder.
*/

#pragma once

#include "ast.hpp"

#include <map>
#include <optional>
#include <set>

namespace cltl::constraint
{

/*! \brief A set of nodes (arity 1, second component unused) or of node pairs (arity 2). Arity 0 is the empty set of either kind. */
struct tuple_set
{
  int arity = 0;
  std::set<std::pair<uint32_t, uint32_t>> items;

  std::size_t size() const noexcept { return items.size(); }

  static tuple_set nodes( std::vector<uint32_t> const& ns )
  {
    tuple_set s;
    s.arity = 1;
    for ( auto n : ns )
      s.items.emplace( n, 0 );
    return s;
  }

  std::vector<uint32_t> members() const
  {
    std::vector<uint32_t> out;
    for ( auto const& [a, b] : items )
      out.push_back( a );
    return out;
  }
};

/*! \brief Dag node per declared node constant, in declaration order. */
using witness = std::vector<uint32_t>;

namespace detail
{

class concrete_eval
{
public:
  concrete_eval( program const& p, syntax_dag const& d, witness const& w ) : p_( p ), d_( d ), w_( w ), universe_( d.reachable() )
  {
    std::sort( universe_.begin(), universe_.end() );
  }

  using env = std::vector<std::pair<std::string, tuple_set>>;

  std::vector<uint32_t> const& universe() const noexcept { return universe_; }

  tuple_set eval( expr const& e, env& en ) const
  {
    switch ( e.kind )
    {
    case expr_kind::name: return name( e, en );
    case expr_kind::labels:
    {
      tuple_set s;
      s.arity = 1;
      for ( auto n : universe_ )
        if ( std::find( e.labels.begin(), e.labels.end(), d_.nodes[n].lbl ) != e.labels.end() )
          s.items.emplace( n, 0 );
      return s;
    }
    case expr_kind::empty: return {};
    case expr_kind::pairs:
    {
      tuple_set s;
      s.arity = 2;
      for ( std::size_t i = 0; i + 1 < e.args.size(); i += 2 )
        for ( auto a : eval( *e.args[i], en ).members() )
          for ( auto b : eval( *e.args[i + 1], en ).members() )
            s.items.emplace( a, b );
      return s;
    }
    case expr_kind::comprehension:
    {
      tuple_set s;
      s.arity = static_cast<int>( e.vars.size() );
      for ( auto a : universe_ )
      {
        if ( s.arity == 1 )
        {
          en.emplace_back( e.vars[0], single( a ) );
          if ( holds( *e.body, en ) )
            s.items.emplace( a, 0 );
          en.pop_back();
          continue;
        }
        for ( auto b : universe_ )
        {
          en.emplace_back( e.vars[0], single( a ) );
          en.emplace_back( e.vars[1], single( b ) );
          if ( holds( *e.body, en ) )
            s.items.emplace( a, b );
          en.resize( en.size() - 2 );
        }
      }
      return s;
    }
    case expr_kind::union_:
    {
      auto a = eval( *e.args[0], en );
      auto b = eval( *e.args[1], en );
      a.items.insert( b.items.begin(), b.items.end() );
      a.arity = std::max( a.arity, b.arity );
      return a;
    }
    case expr_kind::intersect:
    {
      auto const a = eval( *e.args[0], en );
      auto const b = eval( *e.args[1], en );
      tuple_set s;
      s.arity = std::max( a.arity, b.arity );
      for ( auto const& t : a.items )
        if ( b.items.count( t ) )
          s.items.insert( t );
      return s;
    }
    case expr_kind::diff:
    {
      auto a = eval( *e.args[0], en );
      auto const b = eval( *e.args[1], en );
      for ( auto const& t : b.items )
        a.items.erase( t );
      a.arity = std::max( a.arity, b.arity );
      return a;
    }
    case expr_kind::product:
    {
      tuple_set s;
      s.arity = 2;
      auto const b = eval( *e.args[1], en ).members();
      for ( auto x : eval( *e.args[0], en ).members() )
        for ( auto y : b )
          s.items.emplace( x, y );
      return s;
    }
    case expr_kind::join: return join( eval( *e.args[0], en ), eval( *e.args[1], en ) );
    case expr_kind::closure: return closure( eval( *e.args[0], en ) );
    case expr_kind::refl_closure:
    {
      auto s = closure( eval( *e.args[0], en ) );
      s.arity = 2;
      for ( auto n : universe_ )
        s.items.emplace( n, n );
      return s;
    }
    case expr_kind::inverse:
    {
      tuple_set s;
      auto const a = eval( *e.args[0], en );
      s.arity = a.arity;
      for ( auto const& [x, y] : a.items )
        s.items.emplace( y, x );
      return s;
    }
    case expr_kind::call: return call( e, en );
    }
    return {};
  }

  bool holds( form const& f, env& en ) const
  {
    switch ( f.kind )
    {
    case form_kind::truth: return f.value;
    case form_kind::in:
    {
      auto const a = eval( *f.lhs, en );
      auto const b = eval( *f.rhs, en );
      return std::includes( b.items.begin(), b.items.end(), a.items.begin(), a.items.end() );
    }
    case form_kind::equal: return eval( *f.lhs, en ).items == eval( *f.rhs, en ).items;
    case form_kind::not_equal: return eval( *f.lhs, en ).items != eval( *f.rhs, en ).items;
    case form_kind::card: return compare( static_cast<int64_t>( eval( *f.lhs, en ).size() ), f.cmp, f.number );
    case form_kind::not_: return !holds( *f.a, en );
    case form_kind::and_: return holds( *f.a, en ) && holds( *f.b, en );
    case form_kind::or_: return holds( *f.a, en ) || holds( *f.b, en );
    case form_kind::implies: return !holds( *f.a, en ) || holds( *f.b, en );
    case form_kind::iff: return holds( *f.a, en ) == holds( *f.b, en );
    case form_kind::forall:
    case form_kind::exists:
    {
      bool const all = f.kind == form_kind::forall;
      auto const dom = eval( *f.domain, en );
      for ( auto const& [a, b] : dom.items )
      {
        en.emplace_back( f.vars[0], single( a ) );
        if ( f.vars.size() == 2 )
          en.emplace_back( f.vars[1], single( b ) );
        bool const v = holds( *f.a, en );
        en.resize( en.size() - f.vars.size() );
        if ( v != all )
          return !all;
      }
      return all;
    }
    }
    return false;
  }

private:
  static tuple_set single( uint32_t n )
  {
    tuple_set s;
    s.arity = 1;
    s.items.emplace( n, 0 );
    return s;
  }

  tuple_set name( expr const& e, env& en ) const
  {
    switch ( e.resolved )
    {
    case name_kind::variable:
      for ( auto it = en.rbegin(); it != en.rend(); ++it )
        if ( it->first == e.name )
          return it->second;
      throw std::logic_error( "unbound variable " + e.name );
    case name_kind::node_const:
    {
      auto const i = *p_.find_node( e.name );
      if ( i >= w_.size() )
        throw std::logic_error( "no witness for node " + e.name );
      return single( w_[i] );
    }
    case name_kind::rel_def:
    {
      env empty;
      return eval( *p_.find_rel( e.name )->value, empty );
    }
    case name_kind::prop:
    {
      tuple_set s;
      s.arity = 1;
      for ( auto n : universe_ )
        if ( d_.nodes[n].lbl == label::of_prop( e.prop ) )
          s.items.emplace( n, 0 );
      return s;
    }
    case name_kind::builtin: return builtin_value( e.which );
    case name_kind::unresolved: break;
    }
    throw std::logic_error( "unresolved name " + e.name );
  }

  tuple_set builtin_value( builtin b ) const
  {
    tuple_set s;
    s.arity = 1;
    switch ( b )
    {
    case builtin::root: s.items.emplace( d_.root, 0 ); break;
    case builtin::nodes: s = tuple_set::nodes( universe_ ); break;
    case builtin::left:
    case builtin::right:
      s.arity = 2;
      for ( auto n : universe_ )
        if ( auto const& c = b == builtin::left ? d_.nodes[n].left : d_.nodes[n].right )
          s.items.emplace( n, *c );
      break;
    case builtin::ap:
    case builtin::temporal:
      for ( auto n : universe_ )
      {
        auto const k = d_.nodes[n].lbl.kind;
        if ( b == builtin::ap ? k == op::atom : is_temporal( k ) )
          s.items.emplace( n, 0 );
      }
      break;
    }
    return s;
  }

  static tuple_set join( tuple_set const& a, tuple_set const& b )
  {
    tuple_set s;
    if ( a.arity == 0 || b.arity == 0 )
      return s;
    s.arity = a.arity + b.arity - 2;
    for ( auto const& [x, y] : a.items )
      for ( auto const& [u, v] : b.items )
      {
        auto const mid_a = a.arity == 1 ? x : y;
        if ( mid_a != u )
          continue;
        if ( a.arity == 1 )
          s.items.emplace( v, 0 );
        else if ( b.arity == 1 )
          s.items.emplace( x, 0 );
        else
          s.items.emplace( x, v );
      }
    return s;
  }

  static tuple_set closure( tuple_set r )
  {
    r.arity = 2;
    while ( true )
    {
      auto const next = join( r, r );
      auto const before = r.size();
      r.items.insert( next.items.begin(), next.items.end() );
      if ( r.size() == before )
        return r;
    }
  }

  tuple_set call( expr const& e, env& en ) const
  {
    auto arg = eval( *e.args[0], en );
    if ( e.name == "l" || e.name == "r" )
      return join( arg, builtin_value( e.name == "l" ? builtin::left : builtin::right ) );
    if ( e.name == "desc" || e.name == "subNodes" )
    {
      auto edges = builtin_value( builtin::left );
      auto const r = builtin_value( builtin::right );
      edges.items.insert( r.items.begin(), r.items.end() );
      auto c = closure( edges );
      if ( e.name == "subNodes" )
        for ( auto n : universe_ )
          c.items.emplace( n, n );
      return join( arg, c );
    }
    auto const* f = p_.find_func( e.name );
    env inner{ { f->param, std::move( arg ) } };
    return eval( *f->body, inner );
  }

  program const& p_;
  syntax_dag const& d_;
  witness const& w_;
  std::vector<uint32_t> universe_;
};

} // namespace detail

inline tuple_set eval_expr( program const& p, expr const& e, syntax_dag const& d, witness const& w = {},
                            std::vector<std::pair<std::string, tuple_set>> bindings = {} )
{
  return detail::concrete_eval( p, d, w ).eval( e, bindings );
}

inline bool holds( program const& p, form const& f, syntax_dag const& d, witness const& w = {} )
{
  detail::concrete_eval::env en;
  return detail::concrete_eval( p, d, w ).holds( f, en );
}

inline bool holds_all( program const& p, syntax_dag const& d, witness const& w )
{
  detail::concrete_eval ev( p, d, w );
  for ( auto const& c : p.constraints )
  {
    detail::concrete_eval::env en;
    if ( !ev.holds( *c, en ) )
      return false;
  }
  return true;
}

/*! \brief Every assignment of distinct nodes to the declared constants that respects their domains. */
inline std::vector<witness> candidate_witnesses( program const& p, syntax_dag const& d )
{
  std::vector<std::vector<uint32_t>> domains;
  for ( auto const& n : p.nodes )
    domains.push_back( eval_expr( p, *n.domain, d ).members() );
  std::vector<witness> out;
  witness cur;
  std::function<void( std::size_t )> rec = [&]( std::size_t i ) {
    if ( i == domains.size() )
    {
      out.push_back( cur );
      return;
    }
    for ( auto n : domains[i] )
      if ( std::find( cur.begin(), cur.end(), n ) == cur.end() )
      {
        cur.push_back( n );
        rec( i + 1 );
        cur.pop_back();
      }
  };
  rec( 0 );
  return out;
}

/*! \brief Cost of one objective; all costs are minimized. `bound` is the node bound used to turn maximization into a cost. */
inline int64_t objective_cost( program const& p, objective const& o, syntax_dag const& d, witness const& w, std::size_t bound )
{
  if ( o.kind == objective_kind::soft )
    return holds( p, *o.fact, d, w ) ? 0 : 1;
  auto const v = eval_expr( p, *o.target, d, w );
  auto const n = static_cast<int64_t>( v.size() );
  if ( o.kind != objective_kind::maximize )
    return n;
  auto const cells = v.arity == 2 ? int64_t( bound ) * int64_t( bound ) : int64_t( bound );
  return cells - n;
}

/*! \brief Summed cost per priority, highest priority first. */
inline std::vector<int64_t> layer_costs( program const& p, syntax_dag const& d, witness const& w, std::size_t bound )
{
  std::vector<int64_t> out;
  for ( auto k : p.priorities() )
  {
    int64_t c = 0;
    for ( auto const& o : p.objectives )
      if ( o.priority == k )
        c += objective_cost( p, o, d, w, bound );
    out.push_back( c );
  }
  return out;
}

struct program_check
{
  witness w;
  std::vector<int64_t> costs;
};

/*! \brief Whether some witness satisfies every constraint; if so, the one with the lexicographically least costs. */
inline std::optional<program_check> check_program( program const& p, syntax_dag const& d, std::size_t bound )
{
  std::optional<program_check> best;
  for ( auto const& w : candidate_witnesses( p, d ) )
  {
    if ( !holds_all( p, d, w ) )
      continue;
    auto costs = layer_costs( p, d, w, bound );
    if ( !best || costs < best->costs )
      best = program_check{ w, std::move( costs ) };
  }
  return best;
}

inline bool holds_program( program const& p, syntax_dag const& d )
{
  for ( auto const& w : candidate_witnesses( p, d ) )
    if ( holds_all( p, d, w ) )
      return true;
  return false;
}

} // namespace cltl::constraint
