/*!
  \file equivalence.hpp
  \brief Comparing learned formulas with expected ones
*/

#pragma once

#include "eval.hpp"
#include "ltl.hpp"

#include <random>

namespace cltl
{

inline constexpr std::size_t semantic_samples = 10000;
inline constexpr std::size_t semantic_max_length = 10;

/*! \brief Random lassos with 1..max_len states, drawn from a fixed seed. */
inline std::vector<lasso_trace> random_lassos( std::size_t num_props, std::size_t count, std::size_t max_len, uint64_t seed )
{
  std::mt19937_64 rng( seed );
  std::bernoulli_distribution coin( 0.5 );
  std::vector<lasso_trace> out;
  out.reserve( count );
  for ( std::size_t i = 0; i < count; ++i )
  {
    auto const len = std::uniform_int_distribution<std::size_t>( 1, max_len )( rng );
    std::vector<state> states( len, state( num_props ) );
    for ( auto& s : states )
      for ( std::size_t p = 0; p < num_props; ++p )
        s[p] = coin( rng );
    auto const loop = std::uniform_int_distribution<std::size_t>( 0, len - 1 )( rng );
    out.emplace_back( num_props, std::move( states ), loop );
  }
  return out;
}

/*! \brief Equal after ordering the operands of commutative operators. */
inline bool literally_equal( formula_ptr const& a, formula_ptr const& b )
{
  return equal( *normalize_commutative( a ), *normalize_commutative( b ) );
}

/*! \brief Same truth value at position 0 of every lasso in the set. */
inline bool agree_on( formula const& a, formula const& b, std::vector<lasso_trace> const& traces )
{
  auto const da = formula_to_dag( a, true ), db = formula_to_dag( b, true );
  for ( auto const& t : traces )
    if ( evaluate( da, t, 0 ) != evaluate( db, t, 0 ) )
      return false;
  return true;
}

/*! \brief Whether `strong` implies `weak` at position 0 of every lasso in the set. */
inline bool implies_on( formula const& strong, formula const& weak, std::vector<lasso_trace> const& traces )
{
  auto const ds = formula_to_dag( strong, true ), dw = formula_to_dag( weak, true );
  for ( auto const& t : traces )
    if ( evaluate( ds, t, 0 ) && !evaluate( dw, t, 0 ) )
      return false;
  return true;
}

enum class match_kind
{
  none,
  literal,  /* identical up to commutative operand order */
  semantic, /* agree on every sampled lasso */
};

/*! \brief Matches a learned formula against an expected one: literally, else on random lassos. */
inline match_kind matches_target( formula_ptr const& learned, formula_ptr const& target, std::size_t num_props, uint64_t seed = 1 )
{
  if ( literally_equal( learned, target ) )
    return match_kind::literal;
  if ( agree_on( *learned, *target, random_lassos( num_props, semantic_samples, semantic_max_length, seed ) ) )
    return match_kind::semantic;
  return match_kind::none;
}

} // namespace cltl
