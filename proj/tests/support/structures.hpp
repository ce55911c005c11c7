#pragma once

#include <cltl/ltl.hpp>

#include <functional>

namespace cltl::testkit
{

/*!
  Calls `visit` on every DAG with 1..n nodes in slot form: children have
  smaller indices, the root is the last node, every node is reachable from
  it and each proposition labels at most one node.
*/
inline void enumerate_slot_dags( std::size_t n, std::size_t num_props, std::function<void( syntax_dag const& )> const& visit )
{
  syntax_dag d;
  std::vector<char> prop_taken( num_props, 0 );

  auto all_reachable = [&] {
    return d.reachable().size() == d.nodes.size();
  };

  std::function<void( std::size_t )> grow = [&]( std::size_t m ) {
    if ( m == d.nodes.size() )
    {
      d.root = static_cast<uint32_t>( m - 1 );
      if ( all_reachable() )
        visit( d );
      return;
    }
    auto const i = static_cast<uint32_t>( d.nodes.size() );
    for ( uint32_t l = 0; l < num_operators + num_props; ++l )
    {
      auto const lbl = label::from_index( l );
      auto const a = arity( lbl.kind );
      if ( lbl.kind == op::atom )
      {
        if ( prop_taken[lbl.prop] )
          continue;
        prop_taken[lbl.prop] = 1;
        d.nodes.push_back( { lbl, std::nullopt, std::nullopt } );
        grow( m );
        d.nodes.pop_back();
        prop_taken[lbl.prop] = 0;
        continue;
      }
      for ( uint32_t x = 0; x < i; ++x )
      {
        if ( a == 1 )
        {
          d.nodes.push_back( { lbl, x, std::nullopt } );
          grow( m );
          d.nodes.pop_back();
          continue;
        }
        for ( uint32_t y = 0; y < i; ++y )
        {
          d.nodes.push_back( { lbl, x, y } );
          grow( m );
          d.nodes.pop_back();
        }
      }
    }
  };

  for ( std::size_t m = 1; m <= n; ++m )
    grow( m );
}

} // namespace cltl::testkit
