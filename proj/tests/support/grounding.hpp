/*!
  \file grounding.hpp
  \brief Exhaustive comparison of grounded constraints with their concrete evaluation
*/

#pragma once

#include <cltl/constraint/eval.hpp>
#include <cltl/constraint/parser.hpp>
#include <cltl/ground.hpp>
#include <cltl/ltl.hpp>

#include "battery.hpp"
#include "structures.hpp"

#include <functional>
#include <set>
#include <string>

namespace cltl::testkit
{


/* a universe whose variables are numbered consecutively, plus the map from DAGs to assignments */
struct test_universe
{
  symbolic_universe u;
  bool_builder b;
  int num_vars = 0;
  std::vector<int> used;
  std::vector<std::vector<int>> labels, child_l, child_r, consts;

  test_universe( std::size_t n, std::size_t num_props, std::size_t num_consts = 0 )
  {
    u.n = n;
    u.num_props = num_props;
    auto fresh = [&] { return ++num_vars; };
    for ( std::size_t i = 0; i < n; ++i )
      used.push_back( fresh() );
    labels.assign( n, {} );
    child_l.assign( n, std::vector<int>( n, 0 ) );
    child_r.assign( n, std::vector<int>( n, 0 ) );
    for ( std::size_t i = 0; i < n; ++i )
    {
      for ( std::size_t k = 0; k < u.num_labels(); ++k )
        labels[i].push_back( fresh() );
      for ( std::size_t j = 0; j < i; ++j )
      {
        child_l[i][j] = fresh();
        child_r[i][j] = fresh();
      }
    }
    consts.assign( num_consts, {} );
    for ( auto& c : consts )
      for ( std::size_t i = 0; i < n; ++i )
        c.push_back( fresh() );

    auto as_expr = [&]( int v ) { return v ? b.var( v ) : bfalse; };
    for ( auto v : used )
      u.used.push_back( as_expr( v ) );
    u.labels.assign( n, {} );
    u.child_l.assign( n, std::vector<bexpr>( n, bfalse ) );
    u.child_r.assign( n, std::vector<bexpr>( n, bfalse ) );
    for ( std::size_t i = 0; i < n; ++i )
    {
      for ( auto v : labels[i] )
        u.labels[i].push_back( as_expr( v ) );
      for ( std::size_t j = 0; j < n; ++j )
      {
        u.child_l[i][j] = as_expr( child_l[i][j] );
        u.child_r[i][j] = as_expr( child_r[i][j] );
      }
    }
    u.consts.assign( num_consts, {} );
    for ( std::size_t c = 0; c < num_consts; ++c )
      for ( auto v : consts[c] )
        u.consts[c].push_back( as_expr( v ) );
  }

  /* values indexed by variable; the DAG is in slot form */
  std::vector<char> assignment( syntax_dag const& d, constraint::witness const& w = {} ) const
  {
    std::vector<char> val( num_vars + 1, 0 );
    for ( std::size_t i = 0; i < d.nodes.size(); ++i )
    {
      auto const& nd = d.nodes[i];
      val[used[i]] = 1;
      val[labels[i][nd.lbl.index()]] = 1;
      if ( nd.left )
        val[child_l[i][*nd.left]] = 1;
      if ( nd.right )
        val[child_r[i][*nd.right]] = 1;
    }
    for ( std::size_t c = 0; c < w.size(); ++c )
      val[consts[c][w[c]]] = 1;
    return val;
  }

  std::vector<char> evaluate( std::vector<char> const& val ) const
  {
    return b.evaluate_all( [&]( int v ) { return val[v] != 0; } );
  }
};

bool distinct( constraint::witness const& w )
{
  return std::set<uint32_t>( w.begin(), w.end() ).size() == w.size();
}

/* every assignment of node constants to slots below m */
std::vector<constraint::witness> all_witnesses( std::size_t k, std::size_t m )
{
  std::vector<constraint::witness> out{ {} };
  for ( std::size_t c = 0; c < k; ++c )
  {
    std::vector<constraint::witness> next;
    for ( auto const& w : out )
      for ( uint32_t i = 0; i < m; ++i )
      {
        auto x = w;
        x.push_back( i );
        next.push_back( x );
      }
    out = std::move( next );
  }
  return out;
}

struct soundness_report
{
  std::size_t checks = 0;
  std::size_t mismatches = 0;
};

/*!
  For every program of the battery, every slot DAG up to `max_n` slots over two
  propositions and every placement of the node constants: domain membership,
  constraint truth and objective costs of the grounding agree with the
  concrete evaluator. Each disagreement is passed to `report`.
*/
inline soundness_report grounding_soundness( std::size_t max_n, std::function<void( std::string const& )> const& report = {} )
{
  struct entry
  {
    std::string name;
    std::vector<std::string> props;
    std::string src;
  };
  std::vector<entry> battery;
  for ( auto const& [name, src] : small_battery() )
    battery.push_back( { name, { "p0", "p1" }, src } );
  battery.push_back( { "repair", { "green", "red" }, repair_program } );
  battery.push_back( { "weakening", { "XrayMode", "SpreaderIn" }, weakening_program } );

  soundness_report out;
  auto mismatch = [&]( std::string const& what ) {
    ++out.mismatches;
    if ( report )
      report( what );
  };
  for ( auto const& [name, props, src] : battery )
  {
    prop_list const ap( props );
    auto const p = constraint::parse_constraints( src, ap );
    for ( std::size_t n = 1; n <= max_n; ++n )
    {
      test_universe t( n, 2, p.nodes.size() );
      std::vector<bexpr> cons;
      for ( auto const& c : p.constraints )
        cons.push_back( ground_formula( p, *c, t.u, t.b ) );
      std::vector<std::vector<bexpr>> domains;
      for ( auto const& nd : p.nodes )
        domains.push_back( ground_expr( p, *nd.domain, t.u, t.b ).cells );
      std::vector<grounded_objective> objs;
      for ( auto const& o : p.objectives )
        objs.push_back( ground_objective( p, o, t.u, t.b ) );

      enumerate_slot_dags( n, 2, [&]( syntax_dag const& d ) {
        auto const where = name + " on " + to_string( d, ap ) + " n=" + std::to_string( n );
        auto const cands = constraint::candidate_witnesses( p, d );
        std::set<constraint::witness> cand_set( cands.begin(), cands.end() );
        for ( auto const& w : all_witnesses( p.nodes.size(), d.nodes.size() ) )
        {
          auto const all = t.evaluate( t.assignment( d, w ) );
          bool in_domains = distinct( w );
          for ( std::size_t c = 0; c < w.size(); ++c )
            in_domains = in_domains && bool_builder::value_of( all, domains[c][w[c]] );
          ++out.checks;
          if ( in_domains != cand_set.contains( w ) )
            mismatch( "domains of " + where );
          if ( !in_domains )
            continue;
          for ( std::size_t c = 0; c < cons.size(); ++c )
          {
            ++out.checks;
            if ( bool_builder::value_of( all, cons[c] ) != constraint::holds( p, *p.constraints[c], d, w ) )
              mismatch( "constraint " + std::to_string( c ) + " of " + where );
          }
          for ( std::size_t k = 0; k < objs.size(); ++k )
          {
            int64_t cost = objs[k].offset;
            for ( auto const& s : objs[k].soft )
              cost += !bool_builder::value_of( all, s );
            ++out.checks;
            if ( cost != constraint::objective_cost( p, p.objectives[k], d, w, n ) )
              mismatch( "objective " + std::to_string( k ) + " of " + where );
          }
        }
      } );
    }
  }
  return out;
}

} // namespace cltl::testkit
