/*!
  \file trace.hpp
  \brief Lasso traces u v^omega and samples of positive/negative traces
*/

#pragma once

#include "ltl.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cltl
{

using state = std::vector<bool>;

/*! \brief Ultimately periodic trace stored as the finite word uv plus |u|.

  The successor of the last position is `loop_start`.
*/
class lasso_trace
{
public:
  lasso_trace() = default;

  lasso_trace( std::size_t num_props, std::vector<state> prefix_loop, std::size_t loop_start )
      : num_props_( num_props ), states_( std::move( prefix_loop ) ), loop_start_( loop_start )
  {
    if ( states_.empty() )
      throw std::invalid_argument( "lasso_trace: empty word" );
    if ( loop_start_ >= states_.size() )
      throw std::invalid_argument( "lasso_trace: loop start " + std::to_string( loop_start_ ) + " out of range" );
    for ( auto const& s : states_ )
      if ( s.size() != num_props_ )
        throw std::invalid_argument( "lasso_trace: state width does not match proposition count" );
  }

  std::size_t length() const noexcept { return states_.size(); }
  std::size_t loop_start() const noexcept { return loop_start_; }
  std::size_t loop_length() const noexcept { return states_.size() - loop_start_; }
  std::size_t num_props() const noexcept { return num_props_; }
  std::vector<state> const& states() const noexcept { return states_; }

  bool value( std::size_t pos, uint32_t p ) const
  {
    check( pos );
    if ( p >= num_props_ )
      throw std::out_of_range( "lasso_trace: unknown proposition " + std::to_string( p ) );
    return states_[pos][p];
  }

  std::size_t succ( std::size_t pos ) const
  {
    check( pos );
    return pos + 1 < states_.size() ? pos + 1 : loop_start_;
  }

  /*! \brief {pos, succ(pos), succ^2(pos), ...} in first-visit order. */
  std::vector<std::size_t> future_indices( std::size_t pos ) const
  {
    check( pos );
    std::vector<std::size_t> out;
    /* positions before the loop are visited once, then the whole loop */
    for ( auto i = pos; i < states_.size(); ++i )
      out.push_back( i );
    for ( auto i = loop_start_; i < pos; ++i )
      out.push_back( i );
    return out;
  }

  /*! \brief State at position `pos` of the infinite word. */
  state const& at_unrolled( std::size_t pos ) const
  {
    if ( pos < states_.size() )
      return states_[pos];
    return states_[loop_start_ + ( pos - loop_start_ ) % loop_length()];
  }

  bool operator==( lasso_trace const& ) const = default;

private:
  void check( std::size_t pos ) const
  {
    if ( pos >= states_.size() )
      throw std::out_of_range( "lasso_trace: position " + std::to_string( pos ) + " out of range" );
  }

  std::size_t num_props_ = 0;
  std::vector<state> states_;
  std::size_t loop_start_ = 0;
};

/*! \brief Unique representation of the infinite word: shortest prefix, primitive loop. */
inline lasso_trace canonical_form( lasso_trace const& t )
{
  std::vector<state> prefix( t.states().begin(), t.states().begin() + t.loop_start() );
  std::vector<state> loop( t.states().begin() + t.loop_start(), t.states().end() );

  /* reduce the loop to its primitive period */
  auto const n = loop.size();
  for ( std::size_t p = 1; p <= n; ++p )
  {
    if ( n % p )
      continue;
    bool periodic = true;
    for ( std::size_t i = p; i < n && periodic; ++i )
      periodic = loop[i] == loop[i - p];
    if ( periodic )
    {
      loop.resize( p );
      break;
    }
  }

  /* absorb prefix states that equal the loop's last state */
  while ( !prefix.empty() && prefix.back() == loop.back() )
  {
    std::rotate( loop.rbegin(), loop.rbegin() + 1, loop.rend() );
    prefix.pop_back();
  }

  auto const start = prefix.size();
  prefix.insert( prefix.end(), loop.begin(), loop.end() );
  return lasso_trace( t.num_props(), std::move( prefix ), start );
}

/*! \brief Whether two lassos denote the same infinite word. */
inline bool same_word( lasso_trace const& a, lasso_trace const& b )
{
  return canonical_form( a ) == canonical_form( b );
}

class sample
{
public:
  sample() = default;

  sample( prop_list ap, std::vector<lasso_trace> positives, std::vector<lasso_trace> negatives )
      : ap_( std::move( ap ) ), positives_( std::move( positives ) ), negatives_( std::move( negatives ) )
  {
    for ( auto const* set : { &positives_, &negatives_ } )
      for ( auto const& t : *set )
        if ( t.num_props() != ap_.size() )
          throw std::invalid_argument( "sample: trace width differs from the proposition list" );
    std::vector<lasso_trace> pos_canon;
    for ( auto const& t : positives_ )
      pos_canon.push_back( canonical_form( t ) );
    for ( std::size_t j = 0; j < negatives_.size(); ++j )
    {
      auto const c = canonical_form( negatives_[j] );
      for ( std::size_t i = 0; i < pos_canon.size(); ++i )
        if ( pos_canon[i] == c )
          throw std::invalid_argument( "sample: positive trace " + std::to_string( i ) + " and negative trace " +
                                       std::to_string( j ) + " are the same infinite word" );
    }
  }

  prop_list const& ap() const noexcept { return ap_; }
  std::vector<lasso_trace> const& positives() const noexcept { return positives_; }
  std::vector<lasso_trace> const& negatives() const noexcept { return negatives_; }
  std::size_t size() const noexcept { return positives_.size() + negatives_.size(); }

  /*! \brief Trace by global index: positives first, then negatives. */
  lasso_trace const& trace( std::size_t i ) const
  {
    return i < positives_.size() ? positives_[i] : negatives_.at( i - positives_.size() );
  }

  bool is_positive( std::size_t i ) const noexcept { return i < positives_.size(); }

private:
  prop_list ap_;
  std::vector<lasso_trace> positives_;
  std::vector<lasso_trace> negatives_;
};

} // namespace cltl
