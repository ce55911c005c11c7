/*!
  \file sat.hpp
  \brief Incremental CDCL SAT solver and the backend contract used by the optimizer

  The solver follows the usual MiniSat design: two watched literals with blockers,
  first-UIP learning with clause minimization, VSIDS, phase saving, Luby restarts,
  and activity-based learnt clause deletion. There is no randomness, so identical
  clause and assumption sequences give identical models.
*/

#pragma once

#include <algorithm>
#include <chrono>
#include <concepts>
#include <cstdlib>
#include <initializer_list>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace cltl
{

enum class sat_result
{
  sat,
  unsat,
  unknown, /* deadline reached */
};

/*! \brief What the optimizer needs from a SAT backend. */
template<typename S>
concept sat_backend = requires( S s, S const cs, std::span<int const> lits, int v ) {
  { s.new_var() } -> std::same_as<int>;
  { s.reserve_vars( v ) };
  { cs.num_vars() } -> std::same_as<int>;
  { s.add_clause( lits ) } -> std::same_as<bool>;
  { s.solve( lits ) } -> std::same_as<sat_result>;
  { cs.model_value( v ) } -> std::same_as<bool>;
};

struct sat_statistics
{
  uint64_t solves = 0;
  uint64_t conflicts = 0;
  uint64_t decisions = 0;
  uint64_t propagations = 0;
};

class sat_solver
{
public:
  using clock = std::chrono::steady_clock;

  int new_var()
  {
    auto const v = static_cast<uint32_t>( assigns_.size() );
    assigns_.push_back( undef );
    level_.push_back( 0 );
    reason_.push_back( no_reason );
    polarity_.push_back( 1 ); /* prefer false */
    activity_.push_back( 0.0 );
    seen_.push_back( 0 );
    heap_index_.push_back( -1 );
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert( v );
    return static_cast<int>( v ) + 1;
  }

  void reserve_vars( int n )
  {
    while ( num_vars() < n )
      new_var();
  }

  int num_vars() const { return static_cast<int>( assigns_.size() ); }

  /*! \brief Adds a clause at decision level 0; returns false once the formula is unsatisfiable. */
  bool add_clause( std::span<int const> dimacs )
  {
    if ( !ok_ )
      return false;
    cancel_until( 0 );
    std::vector<uint32_t> lits;
    lits.reserve( dimacs.size() );
    for ( auto d : dimacs )
    {
      if ( d == 0 )
        throw std::invalid_argument( "sat_solver: literal 0" );
      reserve_vars( std::abs( d ) );
      lits.push_back( to_lit( d ) );
    }
    std::sort( lits.begin(), lits.end() );
    std::vector<uint32_t> kept;
    for ( std::size_t i = 0; i < lits.size(); ++i )
    {
      auto const l = lits[i];
      if ( value( l ) == l_true || ( i > 0 && l == ( lits[i - 1] ^ 1u ) ) )
        return true; /* satisfied or tautology */
      if ( value( l ) == l_false || ( i > 0 && l == lits[i - 1] ) )
        continue;
      kept.push_back( l );
    }
    if ( kept.empty() )
      return ok_ = false;
    if ( kept.size() == 1 )
    {
      enqueue( kept[0], no_reason );
      if ( propagate() != no_reason )
        ok_ = false;
      return ok_;
    }
    auto const cr = alloc_clause( std::move( kept ), false );
    attach( cr );
    return true;
  }

  bool add_clause( std::initializer_list<int> lits ) { return add_clause( std::span<int const>( lits.begin(), lits.size() ) ); }

  sat_result solve( std::span<int const> assumptions = {} )
  {
    ++stats_.solves;
    model_.clear();
    if ( !ok_ )
      return sat_result::unsat;
    if ( deadline_passed() )
      return sat_result::unknown;
    assumptions_.clear();
    for ( auto a : assumptions )
    {
      reserve_vars( std::abs( a ) );
      assumptions_.push_back( to_lit( a ) );
    }

    max_learnts_ = std::max<double>( 1000.0, clauses_.size() / 3.0 );
    sat_result status = sat_result::unknown;
    for ( uint32_t restart = 0; status == sat_result::unknown; ++restart )
    {
      auto const budget = static_cast<uint64_t>( luby( 2.0, restart ) * 100 );
      status = search( budget );
      if ( status == sat_result::unknown && deadline_passed() )
        break;
    }

    if ( status == sat_result::sat )
    {
      model_.resize( assigns_.size() );
      for ( std::size_t v = 0; v < assigns_.size(); ++v )
        model_[v] = assigns_[v] == l_true;
    }
    cancel_until( 0 );
    return status;
  }

  sat_result solve( std::initializer_list<int> assumptions ) { return solve( std::span<int const>( assumptions.begin(), assumptions.size() ) ); }

  /*! \brief Value of variable v (1-based) in the last model; unassigned variables read false. */
  bool model_value( int v ) const
  {
    auto const idx = static_cast<std::size_t>( v - 1 );
    return idx < model_.size() && model_[idx];
  }

  std::vector<bool> const& model() const noexcept { return model_; }

  void set_deadline( std::optional<clock::time_point> deadline ) { deadline_ = deadline; }
  sat_statistics const& statistics() const noexcept { return stats_; }
  bool okay() const noexcept { return ok_; }

private:
  static constexpr int8_t l_true = 1;
  static constexpr int8_t l_false = 0;
  static constexpr int8_t undef = 2;
  static constexpr uint32_t no_reason = UINT32_MAX;

  struct clause_data
  {
    std::vector<uint32_t> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0.0;
  };

  struct watcher
  {
    uint32_t cref;
    uint32_t blocker;
  };

  static uint32_t to_lit( int d ) { return ( static_cast<uint32_t>( std::abs( d ) - 1 ) << 1 ) | ( d < 0 ? 1u : 0u ); }
  static uint32_t var_of( uint32_t l ) { return l >> 1; }
  static bool sign_of( uint32_t l ) { return l & 1u; }

  int8_t value( uint32_t l ) const
  {
    auto const a = assigns_[var_of( l )];
    if ( a == undef )
      return undef;
    return static_cast<int8_t>( a ^ static_cast<int8_t>( sign_of( l ) ) );
  }

  uint32_t decision_level() const { return static_cast<uint32_t>( trail_lim_.size() ); }

  void enqueue( uint32_t l, uint32_t reason )
  {
    auto const v = var_of( l );
    assigns_[v] = sign_of( l ) ? l_false : l_true;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back( l );
  }

  uint32_t alloc_clause( std::vector<uint32_t> lits, bool learnt )
  {
    auto const cr = static_cast<uint32_t>( clauses_.size() );
    clauses_.push_back( { std::move( lits ), learnt, false, 0.0 } );
    if ( learnt )
      learnts_.push_back( cr );
    return cr;
  }

  void attach( uint32_t cr )
  {
    auto const& c = clauses_[cr].lits;
    watches_[c[0] ^ 1u].push_back( { cr, c[1] } );
    watches_[c[1] ^ 1u].push_back( { cr, c[0] } );
  }

  /*! returns the conflicting clause or no_reason */
  uint32_t propagate()
  {
    uint32_t conflict = no_reason;
    while ( qhead_ < trail_.size() )
    {
      auto const p = trail_[qhead_++];
      ++stats_.propagations;
      auto& ws = watches_[p];
      std::size_t i = 0, j = 0;
      auto const false_lit = p ^ 1u;
      while ( i < ws.size() )
      {
        auto const w = ws[i];
        if ( value( w.blocker ) == l_true )
        {
          ws[j++] = ws[i++];
          continue;
        }
        auto& cd = clauses_[w.cref];
        if ( cd.deleted )
        {
          ++i;
          continue;
        }
        auto& c = cd.lits;
        if ( c[0] == false_lit )
          std::swap( c[0], c[1] );
        ++i;
        auto const first = c[0];
        if ( first != w.blocker && value( first ) == l_true )
        {
          ws[j++] = { w.cref, first };
          continue;
        }
        bool found = false;
        for ( std::size_t k = 2; k < c.size(); ++k )
        {
          if ( value( c[k] ) != l_false )
          {
            std::swap( c[1], c[k] );
            watches_[c[1] ^ 1u].push_back( { w.cref, first } );
            found = true;
            break;
          }
        }
        if ( found )
          continue;
        ws[j++] = { w.cref, first };
        if ( value( first ) == l_false )
        {
          conflict = w.cref;
          qhead_ = trail_.size();
          while ( i < ws.size() )
            ws[j++] = ws[i++];
        }
        else
          enqueue( first, w.cref );
      }
      ws.resize( j );
      if ( conflict != no_reason )
        break;
    }
    return conflict;
  }

  void analyze( uint32_t conflict, std::vector<uint32_t>& learnt, uint32_t& back_level )
  {
    learnt.clear();
    learnt.push_back( 0 ); /* placeholder for the asserting literal */
    int path = 0;
    uint32_t p = UINT32_MAX;
    auto index = trail_.size();
    do
    {
      auto& c = clauses_[conflict];
      if ( c.learnt )
        bump_clause( c );
      for ( std::size_t k = ( p == UINT32_MAX ? 0 : 1 ); k < c.lits.size(); ++k )
      {
        auto const q = c.lits[k];
        auto const v = var_of( q );
        if ( !seen_[v] && level_[v] > 0 )
        {
          bump_var( v );
          seen_[v] = 1;
          if ( level_[v] >= decision_level() )
            ++path;
          else
            learnt.push_back( q );
        }
      }
      while ( !seen_[var_of( trail_[--index] )] )
        ;
      p = trail_[index];
      conflict = reason_[var_of( p )];
      seen_[var_of( p )] = 0;
      --path;
      /* reason clauses keep their implied literal first */
      if ( path > 0 && conflict != no_reason && clauses_[conflict].lits[0] != p )
      {
        auto& lits = clauses_[conflict].lits;
        auto it = std::find( lits.begin(), lits.end(), p );
        std::swap( *it, lits[0] );
      }
    } while ( path > 0 );
    learnt[0] = p ^ 1u;

    /* minimization: drop literals whose reason is covered by the clause */
    analyze_clear_.assign( learnt.begin(), learnt.end() );
    std::size_t j = 1;
    for ( std::size_t i = 1; i < learnt.size(); ++i )
    {
      auto const v = var_of( learnt[i] );
      if ( reason_[v] == no_reason || !redundant( learnt[i] ) )
        learnt[j++] = learnt[i];
    }
    learnt.resize( j );

    if ( learnt.size() == 1 )
      back_level = 0;
    else
    {
      std::size_t max_i = 1;
      for ( std::size_t i = 2; i < learnt.size(); ++i )
        if ( level_[var_of( learnt[i] )] > level_[var_of( learnt[max_i] )] )
          max_i = i;
      std::swap( learnt[1], learnt[max_i] );
      back_level = level_[var_of( learnt[1] )];
    }
    for ( auto l : analyze_clear_ )
      seen_[var_of( l )] = 0;
  }

  /* every non-root literal of the reason is already in the learnt clause */
  bool redundant( uint32_t l ) const
  {
    auto const& c = clauses_[reason_[var_of( l )]].lits;
    for ( std::size_t k = 0; k < c.size(); ++k )
    {
      auto const v = var_of( c[k] );
      if ( v == var_of( l ) )
        continue;
      if ( !seen_[v] && level_[v] > 0 )
        return false;
    }
    return true;
  }

  void cancel_until( uint32_t level )
  {
    if ( decision_level() <= level )
      return;
    for ( auto i = trail_.size(); i-- > trail_lim_[level]; )
    {
      auto const v = var_of( trail_[i] );
      assigns_[v] = undef;
      reason_[v] = no_reason;
      polarity_[v] = sign_of( trail_[i] );
      if ( heap_index_[v] < 0 )
        heap_insert( v );
    }
    trail_.resize( trail_lim_[level] );
    trail_lim_.resize( level );
    qhead_ = trail_.size();
  }

  sat_result search( uint64_t conflict_budget )
  {
    uint64_t conflicts = 0;
    std::vector<uint32_t> learnt;
    for ( ;; )
    {
      auto const conflict = propagate();
      if ( conflict != no_reason )
      {
        ++stats_.conflicts;
        ++conflicts;
        if ( decision_level() == 0 )
        {
          ok_ = false;
          return sat_result::unsat;
        }
        uint32_t back_level = 0;
        analyze( conflict, learnt, back_level );
        cancel_until( back_level );
        if ( learnt.size() == 1 )
          enqueue( learnt[0], no_reason );
        else
        {
          auto const cr = alloc_clause( learnt, true );
          attach( cr );
          bump_clause( clauses_[cr] );
          enqueue( learnt[0], cr );
        }
        var_inc_ /= 0.95;
        clause_inc_ /= 0.999;
        if ( ( stats_.conflicts & 1023u ) == 0 && deadline_passed() )
        {
          cancel_until( 0 );
          return sat_result::unknown;
        }
        continue;
      }

      if ( conflicts >= conflict_budget )
      {
        cancel_until( 0 );
        return sat_result::unknown;
      }
      if ( static_cast<double>( learnts_.size() ) - static_cast<double>( trail_.size() ) >= max_learnts_ )
      {
        reduce_db();
        max_learnts_ *= 1.1;
      }

      uint32_t next = UINT32_MAX;
      while ( decision_level() < assumptions_.size() )
      {
        auto const a = assumptions_[decision_level()];
        if ( value( a ) == l_true )
          trail_lim_.push_back( static_cast<uint32_t>( trail_.size() ) ); /* dummy level */
        else if ( value( a ) == l_false )
          return sat_result::unsat; /* under these assumptions */
        else
        {
          next = a;
          break;
        }
      }
      if ( next == UINT32_MAX )
      {
        auto const v = pick_branch_var();
        if ( v == UINT32_MAX )
          return sat_result::sat;
        next = ( v << 1 ) | polarity_[v];
      }
      ++stats_.decisions;
      trail_lim_.push_back( static_cast<uint32_t>( trail_.size() ) );
      enqueue( next, no_reason );
    }
  }

  uint32_t pick_branch_var()
  {
    while ( !heap_.empty() )
    {
      auto const v = heap_pop();
      if ( assigns_[v] == undef )
        return v;
    }
    return UINT32_MAX;
  }

  void reduce_db()
  {
    auto locked = [&]( uint32_t cr ) {
      auto const& c = clauses_[cr].lits;
      auto const v = var_of( c[0] );
      return reason_[v] == cr && value( c[0] ) == l_true;
    };
    std::sort( learnts_.begin(), learnts_.end(), [&]( uint32_t a, uint32_t b ) {
      auto const& ca = clauses_[a];
      auto const& cb = clauses_[b];
      if ( ( ca.lits.size() > 2 ) != ( cb.lits.size() > 2 ) )
        return ca.lits.size() > 2;
      if ( ca.activity != cb.activity )
        return ca.activity < cb.activity;
      return a < b;
    } );
    std::vector<uint32_t> kept;
    auto const half = learnts_.size() / 2;
    for ( std::size_t i = 0; i < learnts_.size(); ++i )
    {
      auto const cr = learnts_[i];
      auto& c = clauses_[cr];
      if ( i < half && c.lits.size() > 2 && !locked( cr ) )
      {
        c.deleted = true;
        c.lits.shrink_to_fit();
      }
      else
        kept.push_back( cr );
    }
    learnts_ = std::move( kept );
    /* purge watchers of deleted clauses */
    for ( auto& ws : watches_ )
      ws.erase( std::remove_if( ws.begin(), ws.end(), [&]( watcher const& w ) { return clauses_[w.cref].deleted; } ), ws.end() );
  }

  void bump_var( uint32_t v )
  {
    if ( ( activity_[v] += var_inc_ ) > 1e100 )
    {
      for ( auto& a : activity_ )
        a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if ( heap_index_[v] >= 0 )
      heap_up( static_cast<std::size_t>( heap_index_[v] ) );
  }

  void bump_clause( clause_data& c )
  {
    if ( ( c.activity += clause_inc_ ) > 1e20 )
    {
      for ( auto cr : learnts_ )
        clauses_[cr].activity *= 1e-20;
      clause_inc_ *= 1e-20;
    }
  }

  bool deadline_passed() const { return deadline_ && clock::now() >= *deadline_; }

  static double luby( double y, uint32_t x )
  {
    uint32_t size = 1, seq = 0;
    while ( size < x + 1 )
    {
      ++seq;
      size = 2 * size + 1;
    }
    while ( size - 1 != x )
    {
      size = ( size - 1 ) >> 1;
      --seq;
      x = x % size;
    }
    double r = 1.0;
    for ( uint32_t i = 0; i < seq; ++i )
      r *= y;
    return r;
  }

  /* binary max-heap on activity; ties broken by lower variable index */
  bool heap_less( uint32_t a, uint32_t b ) const
  {
    return activity_[a] > activity_[b] || ( activity_[a] == activity_[b] && a < b );
  }

  void heap_insert( uint32_t v )
  {
    heap_index_[v] = static_cast<int>( heap_.size() );
    heap_.push_back( v );
    heap_up( heap_.size() - 1 );
  }

  void heap_up( std::size_t i )
  {
    auto const v = heap_[i];
    while ( i > 0 )
    {
      auto const parent = ( i - 1 ) / 2;
      if ( !heap_less( v, heap_[parent] ) )
        break;
      heap_[i] = heap_[parent];
      heap_index_[heap_[i]] = static_cast<int>( i );
      i = parent;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<int>( i );
  }

  uint32_t heap_pop()
  {
    auto const top = heap_[0];
    heap_index_[top] = -1;
    auto const last = heap_.back();
    heap_.pop_back();
    if ( !heap_.empty() )
    {
      std::size_t i = 0;
      for ( ;; )
      {
        auto child = 2 * i + 1;
        if ( child >= heap_.size() )
          break;
        if ( child + 1 < heap_.size() && heap_less( heap_[child + 1], heap_[child] ) )
          ++child;
        if ( !heap_less( heap_[child], last ) )
          break;
        heap_[i] = heap_[child];
        heap_index_[heap_[i]] = static_cast<int>( i );
        i = child;
      }
      heap_[i] = last;
      heap_index_[last] = static_cast<int>( i );
    }
    return top;
  }

  bool ok_ = true;
  std::vector<clause_data> clauses_;
  std::vector<uint32_t> learnts_;
  std::vector<std::vector<watcher>> watches_;
  std::vector<int8_t> assigns_;
  std::vector<uint32_t> level_;
  std::vector<uint32_t> reason_;
  std::vector<uint8_t> polarity_;
  std::vector<double> activity_;
  std::vector<uint8_t> seen_;
  std::vector<int> heap_index_;
  std::vector<uint32_t> heap_;
  std::vector<uint32_t> trail_;
  std::vector<uint32_t> trail_lim_;
  std::vector<uint32_t> assumptions_;
  std::vector<uint32_t> analyze_clear_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  double max_learnts_ = 1000.0;
  std::vector<bool> model_;
  std::optional<clock::time_point> deadline_;
  sat_statistics stats_;
};

static_assert( sat_backend<sat_solver> );

} // namespace cltl
