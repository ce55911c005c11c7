/*!
  \file brute_force.hpp
  \brief Exhaustive enumeration of formula trees by size (a test oracle for minimality)
*/

#pragma once

#include "eval.hpp"
#include "ltl.hpp"
#include "trace.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace cltl
{

/*! \brief Calls `visit` on every formula tree of size exactly 1..max_size, smallest first.

  Returning false from `visit` stops the enumeration. Within a size the order is
  deterministic: atoms, then unary operators, then binary operators by split.
*/
template<typename Visit>
void enumerate_formulas( std::size_t num_props, std::size_t max_size, Visit&& visit )
{
  static constexpr op unary_ops[] = { op::globally, op::finally, op::next, op::not_ };
  static constexpr op binary_ops[] = { op::until, op::and_, op::or_, op::implies };

  /* by_size[s] holds all trees of size s, kept only while they are still needed as children */
  std::vector<std::vector<formula_ptr>> by_size( max_size + 1 );
  for ( std::size_t s = 1; s <= max_size; ++s )
  {
    bool const store = s < max_size;
    std::vector<formula_ptr> current;
    auto emit = [&]( formula_ptr f ) -> bool {
      if ( !visit( f ) )
        return false;
      if ( store )
        current.push_back( std::move( f ) );
      return true;
    };

    if ( s == 1 )
    {
      for ( uint32_t p = 0; p < num_props; ++p )
        if ( !emit( formula::make_atom( p ) ) )
          return;
    }
    else
    {
      for ( auto o : unary_ops )
        for ( auto const& sub : by_size[s - 1] )
          if ( !emit( formula::make_unary( o, sub ) ) )
            return;
      for ( auto o : binary_ops )
        for ( std::size_t ls = 1; ls + 1 < s; ++ls )
          for ( auto const& l : by_size[ls] )
            for ( auto const& r : by_size[s - 1 - ls] )
              if ( !emit( formula::make_binary( o, l, r ) ) )
                return;
    }
    by_size[s] = std::move( current );
  }
}

/*! \brief Smallest formula (by tree size) consistent with the sample and accepted by the filter. */
inline std::optional<formula_ptr> brute_force_min_consistent( sample const& s, std::size_t max_tree_size,
                                                             std::function<bool( formula const& )> const& shape_filter = {} )
{
  auto const num_props = s.ap().size();
  if ( num_props == 0 || max_tree_size == 0 )
    return std::nullopt;

  std::optional<formula_ptr> found;
  enumerate_formulas( num_props, max_tree_size, [&]( formula_ptr const& f ) {
    auto const d = formula_to_dag( *f, true );
    if ( !consistent( d, s ) )
      return true;
    if ( shape_filter && !shape_filter( *f ) )
      return true;
    found = f;
    return false;
  } );
  return found;
}

} // namespace cltl
