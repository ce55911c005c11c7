#include <cltl/bool_expr.hpp>
#include <cltl/sat.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace cltl;

namespace
{

std::vector<clause> random_cnf( std::mt19937_64& rng, int vars, int clauses, int width )
{
  std::vector<clause> cnf;
  std::uniform_int_distribution<int> var( 1, vars );
  std::bernoulli_distribution sign( 0.5 );
  for ( int i = 0; i < clauses; ++i )
  {
    clause c;
    for ( int j = 0; j < width; ++j )
      c.push_back( sign( rng ) ? var( rng ) : -var( rng ) );
    cnf.push_back( c );
  }
  return cnf;
}

bool satisfies( std::vector<clause> const& cnf, uint64_t bits )
{
  for ( auto const& c : cnf )
  {
    bool sat = false;
    for ( int l : c )
      sat = sat || ( ( ( bits >> ( std::abs( l ) - 1 ) ) & 1 ) == ( l > 0 ? 1u : 0u ) );
    if ( !sat )
      return false;
  }
  return true;
}

bool brute_force_sat( std::vector<clause> const& cnf, int vars )
{
  for ( uint64_t b = 0; b < ( uint64_t( 1 ) << vars ); ++b )
    if ( satisfies( cnf, b ) )
      return true;
  return false;
}

} // namespace

TEST( Sat, TrivialCases )
{
  sat_solver s;
  auto const a = s.new_var(), b = s.new_var();
  s.add_clause( { a, b } );
  s.add_clause( { -a } );
  ASSERT_EQ( s.solve(), sat_result::sat );
  EXPECT_TRUE( s.model_value( b ) );
  EXPECT_EQ( s.solve( { -b } ), sat_result::unsat );
  EXPECT_EQ( s.solve(), sat_result::sat );
  s.add_clause( { -b } );
  EXPECT_EQ( s.solve(), sat_result::unsat );
}

TEST( Sat, PigeonholeIsUnsat )
{
  for ( int holes = 2; holes <= 6; ++holes )
  {
    sat_solver s;
    int const pigeons = holes + 1;
    auto x = [&]( int p, int h ) { return p * holes + h + 1; };
    s.reserve_vars( pigeons * holes );
    for ( int p = 0; p < pigeons; ++p )
    {
      clause c;
      for ( int h = 0; h < holes; ++h )
        c.push_back( x( p, h ) );
      s.add_clause( c );
    }
    for ( int h = 0; h < holes; ++h )
      for ( int p = 0; p < pigeons; ++p )
        for ( int q = p + 1; q < pigeons; ++q )
          s.add_clause( { -x( p, h ), -x( q, h ) } );
    EXPECT_EQ( s.solve(), sat_result::unsat ) << holes;
  }
}

TEST( Sat, RandomAgainstBruteForce )
{
  std::mt19937_64 rng( 41 );
  for ( int round = 0; round < 400; ++round )
  {
    int const vars = 4 + static_cast<int>( rng() % 10 );
    auto const cnf = random_cnf( rng, vars, static_cast<int>( vars * 4.3 ), 3 );
    sat_solver s;
    s.reserve_vars( vars );
    for ( auto const& c : cnf )
      s.add_clause( c );
    auto const r = s.solve();
    ASSERT_EQ( r == sat_result::sat, brute_force_sat( cnf, vars ) );
    if ( r == sat_result::sat )
    {
      uint64_t bits = 0;
      for ( int v = 1; v <= vars; ++v )
        bits |= uint64_t( s.model_value( v ) ) << ( v - 1 );
      ASSERT_TRUE( satisfies( cnf, bits ) );
    }

    /* incremental: assumptions behave like unit clauses */
    for ( int k = 0; k < 5; ++k )
    {
      std::vector<int> as{ static_cast<int>( rng() % vars ) + 1, -( static_cast<int>( rng() % vars ) + 1 ) };
      auto with = cnf;
      for ( int l : as )
        with.push_back( { l } );
      ASSERT_EQ( s.solve( as ) == sat_result::sat, brute_force_sat( with, vars ) );
    }
  }
}

TEST( Sat, DeadlineGivesUnknown )
{
  sat_solver s;
  int const holes = 11, pigeons = 12;
  auto x = [&]( int p, int h ) { return p * holes + h + 1; };
  s.reserve_vars( pigeons * holes );
  for ( int p = 0; p < pigeons; ++p )
  {
    clause c;
    for ( int h = 0; h < holes; ++h )
      c.push_back( x( p, h ) );
    s.add_clause( c );
  }
  for ( int h = 0; h < holes; ++h )
    for ( int p = 0; p < pigeons; ++p )
      for ( int q = p + 1; q < pigeons; ++q )
        s.add_clause( { -x( p, h ), -x( q, h ) } );
  s.set_deadline( sat_solver::clock::now() + std::chrono::milliseconds( 50 ) );
  EXPECT_EQ( s.solve(), sat_result::unknown );
}

TEST( BoolExpr, ConstantFoldingAndHashConsing )
{
  bool_builder b;
  auto const x = b.var( 1 ), y = b.var( 2 );
  EXPECT_EQ( b.land( x, btrue ), x );
  EXPECT_EQ( b.land( x, !x ), bfalse );
  EXPECT_EQ( b.lor( x, !x ), btrue );
  EXPECT_EQ( b.land( x, y ), b.land( y, x ) );
  EXPECT_EQ( b.lxor( x, y ), !b.lxor( !x, y ) );
}

TEST( BoolExpr, TseitinIsEquisatisfiableAndDefinitional )
{
  std::mt19937_64 rng( 43 );
  for ( int round = 0; round < 200; ++round )
  {
    bool_builder b;
    int const vars = 5;
    std::vector<bexpr> pool;
    for ( int v = 1; v <= vars; ++v )
      pool.push_back( b.var( v ) );
    for ( int k = 0; k < 12; ++k )
    {
      auto const a = pool[rng() % pool.size()], c = pool[rng() % pool.size()];
      switch ( rng() % 4 )
      {
      case 0: pool.push_back( b.land( a, c ) ); break;
      case 1: pool.push_back( b.lor( a, !c ) ); break;
      case 2: pool.push_back( b.lxor( a, c ) ); break;
      default: pool.push_back( b.ite( a, c, pool[rng() % pool.size()] ) ); break;
      }
    }
    auto const root = pool.back();

    /* for each input assignment the CNF plus units on the inputs is satisfiable iff root holds */
    for ( uint64_t bits = 0; bits < ( 1u << vars ); ++bits )
    {
      sat_solver s;
      s.reserve_vars( vars );
      std::vector<clause> cnf;
      cnf_sink sink( b, [&] { return s.new_var(); }, cnf );
      sink.assert_true( root );
      for ( auto const& c : cnf )
        s.add_clause( c );
      std::vector<int> as;
      for ( int v = 1; v <= vars; ++v )
        as.push_back( ( bits >> ( v - 1 ) ) & 1 ? v : -v );
      bool const expected = b.evaluate( root, [&]( int v ) { return ( bits >> ( v - 1 ) ) & 1; } );
      ASSERT_EQ( s.solve( as ) == sat_result::sat, expected );
      if ( !expected )
        continue;
      for ( auto const& [t, e] : sink.definitions() )
        ASSERT_EQ( s.model_value( t ), b.evaluate( e, [&]( int v ) { return s.model_value( v ); } ) );
    }
  }
}
