/*!
  \file eval.hpp
  \brief Two independent evaluators of LTL over lasso traces

  `truth_table` walks successor chains directly; `truth_table_fixpoint` iterates
  the expansion laws of F, G and U from their extremal starting points. Both
  return one row per DAG node with one bit per position of uv.
*/

#pragma once

#include "ltl.hpp"
#include "trace.hpp"

#include <vector>

namespace cltl
{

using truth_rows = std::vector<std::vector<bool>>;

namespace detail
{

inline void check_props( syntax_dag const& d, lasso_trace const& t )
{
  for ( auto n : d.reachable() )
    if ( d.nodes[n].lbl.kind == op::atom && d.nodes[n].lbl.prop >= t.num_props() )
      throw std::out_of_range( "evaluate: proposition " + std::to_string( d.nodes[n].lbl.prop ) + " not in trace" );
}

} // namespace detail

/*! \brief Truth value of every reachable node at every position (unreachable rows stay empty). */
inline truth_rows truth_table( syntax_dag const& d, lasso_trace const& t )
{
  detail::check_props( d, t );
  auto const len = t.length();
  truth_rows rows( d.nodes.size() );

  for ( auto n : d.topological_order() )
  {
    auto const& node = d.nodes[n];
    auto& row = rows[n];
    row.assign( len, false );
    auto const* lhs = node.left ? &rows[*node.left] : nullptr;
    auto const* rhs = node.right ? &rows[*node.right] : nullptr;

    for ( std::size_t i = 0; i < len; ++i )
    {
      switch ( node.lbl.kind )
      {
      case op::atom: row[i] = t.value( i, node.lbl.prop ); break;
      case op::not_: row[i] = !( *lhs )[i]; break;
      case op::and_: row[i] = ( *lhs )[i] && ( *rhs )[i]; break;
      case op::or_: row[i] = ( *lhs )[i] || ( *rhs )[i]; break;
      case op::implies: row[i] = !( *lhs )[i] || ( *rhs )[i]; break;
      case op::next: row[i] = ( *lhs )[t.succ( i )]; break;
      case op::finally:
      {
        bool v = false;
        for ( auto j : t.future_indices( i ) )
          v = v || ( *lhs )[j];
        row[i] = v;
        break;
      }
      case op::globally:
      {
        bool v = true;
        for ( auto j : t.future_indices( i ) )
          v = v && ( *lhs )[j];
        row[i] = v;
        break;
      }
      case op::until:
      {
        /* the succ-walk from i visits at most |uv| distinct positions */
        bool v = false;
        auto j = i;
        for ( std::size_t steps = 0; steps < len; ++steps, j = t.succ( j ) )
        {
          if ( ( *rhs )[j] )
          {
            v = true;
            break;
          }
          if ( !( *lhs )[j] )
            break;
        }
        row[i] = v;
        break;
      }
      }
    }
  }
  return rows;
}

inline bool evaluate( syntax_dag const& d, lasso_trace const& t, std::size_t pos )
{
  if ( pos >= t.length() )
    throw std::out_of_range( "evaluate: position out of range" );
  return truth_table( d, t )[d.root][pos];
}

inline bool evaluate( formula const& f, lasso_trace const& t, std::size_t pos = 0 )
{
  return evaluate( formula_to_dag( f, true ), t, pos );
}

/*! \brief Fixpoint evaluator: F/U rows start all-false, G rows all-true. */
inline truth_rows truth_table_fixpoint( syntax_dag const& d, lasso_trace const& t )
{
  detail::check_props( d, t );
  auto const len = t.length();
  truth_rows rows( d.nodes.size() );

  for ( auto n : d.topological_order() )
  {
    auto const& node = d.nodes[n];
    auto& row = rows[n];
    auto const* lhs = node.left ? &rows[*node.left] : nullptr;
    auto const* rhs = node.right ? &rows[*node.right] : nullptr;
    switch ( node.lbl.kind )
    {
    case op::finally:
    case op::until:
      row.assign( len, false );
      break;
    case op::globally:
      row.assign( len, true );
      break;
    default:
      row.assign( len, false );
      for ( std::size_t i = 0; i < len; ++i )
      {
        switch ( node.lbl.kind )
        {
        case op::atom: row[i] = t.states()[i][node.lbl.prop]; break;
        case op::not_: row[i] = !( *lhs )[i]; break;
        case op::and_: row[i] = ( *lhs )[i] && ( *rhs )[i]; break;
        case op::or_: row[i] = ( *lhs )[i] || ( *rhs )[i]; break;
        case op::implies: row[i] = !( *lhs )[i] || ( *rhs )[i]; break;
        case op::next: row[i] = ( *lhs )[t.succ( i )]; break;
        default: break;
        }
      }
      continue;
    }

    /* monotone over a finite lattice: at most |uv| + 1 sweeps */
    for ( std::size_t sweep = 0; sweep <= len; ++sweep )
    {
      bool changed = false;
      for ( std::size_t i = len; i-- > 0; )
      {
        auto const next = row[t.succ( i )];
        bool v = false;
        switch ( node.lbl.kind )
        {
        case op::finally: v = ( *lhs )[i] || next; break;
        case op::globally: v = ( *lhs )[i] && next; break;
        case op::until: v = ( *rhs )[i] || ( ( *lhs )[i] && next ); break;
        default: break;
        }
        if ( v != row[i] )
        {
          row[i] = v;
          changed = true;
        }
      }
      if ( !changed )
        break;
    }
  }
  return rows;
}

/*! \brief True on every positive and false on every negative at position 0. */
inline bool consistent( syntax_dag const& d, sample const& s )
{
  for ( auto const& t : s.positives() )
    if ( !evaluate( d, t, 0 ) )
      return false;
  for ( auto const& t : s.negatives() )
    if ( evaluate( d, t, 0 ) )
      return false;
  return true;
}

inline bool consistent( formula const& f, sample const& s ) { return consistent( formula_to_dag( f, true ), s ); }

} // namespace cltl
