/*!
  \file bool_expr.hpp
  \brief Hash-consed Boolean expressions (AND/XOR graph) and Tseitin conversion to CNF

  Literals everywhere in this library use the DIMACS convention: variable v >= 1,
  negation is -v.
*/

#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

namespace cltl
{

using clause = std::vector<int>;

/*! \brief Handle into a bool_builder: node index times two plus a negation bit. */
class bexpr
{
public:
  constexpr bexpr() = default;

  constexpr uint32_t raw() const noexcept { return raw_; }
  constexpr uint32_t node() const noexcept { return raw_ >> 1; }
  constexpr bool negated() const noexcept { return raw_ & 1u; }
  constexpr bexpr operator!() const noexcept { return from_raw( raw_ ^ 1u ); }

  constexpr bool is_false() const noexcept { return raw_ == 0; }
  constexpr bool is_true() const noexcept { return raw_ == 1; }
  constexpr bool is_const() const noexcept { return raw_ <= 1; }

  static constexpr bexpr from_raw( uint32_t r ) noexcept
  {
    bexpr e;
    e.raw_ = r;
    return e;
  }

  constexpr bool operator==( bexpr const& ) const = default;

private:
  uint32_t raw_ = 0; /* node 0 is the constant false */
};

inline constexpr bexpr bfalse = bexpr::from_raw( 0 );
inline constexpr bexpr btrue = bexpr::from_raw( 1 );

class bool_builder
{
public:
  enum class kind : uint8_t
  {
    constant,
    variable,
    and_,
    xor_,
  };

  struct node
  {
    kind k;
    int var;     /* for variables */
    bexpr a, b;  /* for gates */
  };

  bool_builder() { nodes_.push_back( { kind::constant, 0, {}, {} } ); }

  static bexpr constant( bool v ) { return v ? btrue : bfalse; }

  bexpr var( int v )
  {
    assert( v > 0 );
    if ( auto it = vars_.find( v ); it != vars_.end() )
      return bexpr::from_raw( it->second << 1 );
    auto const id = static_cast<uint32_t>( nodes_.size() );
    nodes_.push_back( { kind::variable, v, {}, {} } );
    vars_.emplace( v, id );
    return bexpr::from_raw( id << 1 );
  }

  /*! \brief Signed DIMACS literal as an expression. */
  bexpr lit( int l ) { return l > 0 ? var( l ) : !var( -l ); }

  bexpr land( bexpr a, bexpr b )
  {
    if ( a.is_false() || b.is_false() )
      return bfalse;
    if ( a.is_true() )
      return b;
    if ( b.is_true() )
      return a;
    if ( a == b )
      return a;
    if ( a == !b )
      return bfalse;
    if ( b.raw() < a.raw() )
      std::swap( a, b );
    return make_gate( kind::and_, a, b );
  }

  bexpr lor( bexpr a, bexpr b ) { return !land( !a, !b ); }
  bexpr implies( bexpr a, bexpr b ) { return lor( !a, b ); }

  bexpr lxor( bexpr a, bexpr b )
  {
    if ( a.is_const() )
      return a.is_true() ? !b : b;
    if ( b.is_const() )
      return b.is_true() ? !a : a;
    if ( a == b )
      return bfalse;
    if ( a == !b )
      return btrue;
    bool const neg = a.negated() != b.negated();
    a = bexpr::from_raw( a.raw() & ~1u );
    b = bexpr::from_raw( b.raw() & ~1u );
    if ( b.raw() < a.raw() )
      std::swap( a, b );
    auto const g = make_gate( kind::xor_, a, b );
    return neg ? !g : g;
  }

  bexpr iff( bexpr a, bexpr b ) { return !lxor( a, b ); }
  bexpr ite( bexpr c, bexpr t, bexpr e ) { return lor( land( c, t ), land( !c, e ) ); }

  bexpr land_all( std::span<bexpr const> xs ) { return balanced( xs, true ); }
  bexpr lor_all( std::span<bexpr const> xs ) { return balanced( xs, false ); }

  node const& at( bexpr e ) const { return nodes_[e.node()]; }
  std::size_t num_nodes() const noexcept { return nodes_.size(); }

  /*! \brief Evaluates under an assignment of variables. */
  bool evaluate( bexpr e, std::function<bool( int )> const& value ) const
  {
    std::unordered_map<uint32_t, bool> memo;
    return eval_rec( e, value, memo );
  }

  /*! \brief Values of every node in one forward sweep (gates only refer to older nodes). */
  std::vector<char> evaluate_all( std::function<bool( int )> const& value ) const
  {
    std::vector<char> v( nodes_.size(), 0 );
    auto get = [&]( bexpr e ) { return static_cast<char>( v[e.node()] != e.negated() ); };
    for ( std::size_t i = 1; i < nodes_.size(); ++i )
    {
      auto const& n = nodes_[i];
      switch ( n.k )
      {
      case kind::constant: break;
      case kind::variable: v[i] = value( n.var ); break;
      case kind::and_: v[i] = get( n.a ) && get( n.b ); break;
      case kind::xor_: v[i] = get( n.a ) != get( n.b ); break;
      }
    }
    return v;
  }

  static bool value_of( std::vector<char> const& all, bexpr e ) { return ( all[e.node()] != 0 ) != e.negated(); }

private:
  bexpr make_gate( kind k, bexpr a, bexpr b )
  {
    auto const key = ( uint64_t( a.raw() ) << 33 ) | ( uint64_t( b.raw() ) << 1 ) | ( k == kind::xor_ ? 1u : 0u );
    if ( auto it = gates_.find( key ); it != gates_.end() )
      return bexpr::from_raw( it->second << 1 );
    auto const id = static_cast<uint32_t>( nodes_.size() );
    nodes_.push_back( { k, 0, a, b } );
    gates_.emplace( key, id );
    return bexpr::from_raw( id << 1 );
  }

  bexpr balanced( std::span<bexpr const> xs, bool conj )
  {
    if ( xs.empty() )
      return constant( conj );
    if ( xs.size() == 1 )
      return xs[0];
    auto const mid = xs.size() / 2;
    auto const l = balanced( xs.subspan( 0, mid ), conj );
    auto const r = balanced( xs.subspan( mid ), conj );
    return conj ? land( l, r ) : lor( l, r );
  }

  bool eval_rec( bexpr e, std::function<bool( int )> const& value, std::unordered_map<uint32_t, bool>& memo ) const
  {
    auto const& n = nodes_[e.node()];
    bool v = false;
    if ( auto it = memo.find( e.node() ); it != memo.end() )
      v = it->second;
    else
    {
      switch ( n.k )
      {
      case kind::constant: v = false; break;
      case kind::variable: v = value( n.var ); break;
      case kind::and_: v = eval_rec( n.a, value, memo ) && eval_rec( n.b, value, memo ); break;
      case kind::xor_: v = eval_rec( n.a, value, memo ) != eval_rec( n.b, value, memo ); break;
      }
      memo.emplace( e.node(), v );
    }
    return v != e.negated();
  }

  std::vector<node> nodes_;
  std::unordered_map<int, uint32_t> vars_;
  std::unordered_map<uint64_t, uint32_t> gates_;
};

/*! \brief Tseitin transformation with full biimplication definitions.

  Each gate gets one fresh variable the first time it is converted; later
  requests reuse it. Fresh variables come from `new_var`, clauses go to `sink`.
*/
class cnf_sink
{
public:
  cnf_sink( bool_builder const& builder, std::function<int()> new_var, std::vector<clause>& sink )
      : builder_( builder ), new_var_( std::move( new_var ) ), sink_( sink )
  {
  }

  /*! \brief Literal equivalent to `e` under the emitted definitions. */
  int to_lit( bexpr e )
  {
    if ( e.is_const() )
      return e.is_true() ? true_lit() : -true_lit();
    auto const l = node_lit( e.node() );
    return e.negated() ? -l : l;
  }

  /*! \brief Asserts `e` as a hard constraint. */
  void assert_true( bexpr e )
  {
    if ( e.is_true() )
      return;
    if ( e.is_false() )
    {
      sink_.push_back( {} );
      return;
    }
    /* split top-level conjunctions into separate units */
    auto const& n = builder_.at( e );
    if ( !e.negated() && n.k == bool_builder::kind::and_ )
    {
      assert_true( n.a );
      assert_true( n.b );
      return;
    }
    sink_.push_back( { to_lit( e ) } );
  }

  int true_lit()
  {
    if ( !true_var_ )
    {
      true_var_ = new_var_();
      sink_.push_back( { true_var_ } );
    }
    return true_var_;
  }

  /*! \brief Definition variables in creation order, with the expression each one names. */
  std::vector<std::pair<int, bexpr>> const& definitions() const noexcept { return defs_; }
  int true_var() const noexcept { return true_var_; }

private:
  int node_lit( uint32_t id )
  {
    if ( auto it = cache_.find( id ); it != cache_.end() )
      return it->second;
    auto const& n = builder_.at( bexpr::from_raw( id << 1 ) );
    int result = 0;
    if ( n.k == bool_builder::kind::variable )
      result = n.var;
    else
    {
      auto const a = to_lit( n.a );
      auto const b = to_lit( n.b );
      auto const t = new_var_();
      if ( n.k == bool_builder::kind::and_ )
      {
        sink_.push_back( { -t, a } );
        sink_.push_back( { -t, b } );
        sink_.push_back( { t, -a, -b } );
      }
      else
      {
        sink_.push_back( { -t, a, b } );
        sink_.push_back( { -t, -a, -b } );
        sink_.push_back( { t, -a, b } );
        sink_.push_back( { t, a, -b } );
      }
      defs_.emplace_back( t, bexpr::from_raw( id << 1 ) );
    }
    cache_.emplace( id, result ? result : defs_.back().first );
    return cache_.at( id );
  }

  bool_builder const& builder_;
  std::function<int()> new_var_;
  std::vector<clause>& sink_;
  std::unordered_map<uint32_t, int> cache_;
  std::vector<std::pair<int, bexpr>> defs_;
  int true_var_ = 0;
};

} // namespace cltl
