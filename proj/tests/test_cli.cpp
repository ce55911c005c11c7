/* Exit codes and file round trips of the command-line tool */

#include <cltl/maxsat.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace
{

namespace fs = std::filesystem;
using namespace cltl;

std::string const cli = CLTL_CLI;
std::string const suites = CLTL_SUITES_DIR;

struct run_result
{
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() / ( "cltl_cli_" + std::to_string( ::getpid() ) + "_" +
                                         ::testing::UnitTest::GetInstance()->current_test_info()->name() );
    fs::create_directories( dir_ );
    put( "traces.txt", "# p eventually holds forever on the positive\n"
                       "0;1::1\n"
                       "---\n"
                       "0::0\n"
                       "---\n"
                       "p\n" );
  }

  void TearDown() override { fs::remove_all( dir_ ); }

  std::string path( std::string const& name ) const { return ( dir_ / name ).string(); }

  void put( std::string const& name, std::string const& text ) const { std::ofstream( path( name ) ) << text; }

  std::string slurp( std::string const& name ) const
  {
    std::ifstream in( path( name ) );
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  run_result run( std::string const& args ) const
  {
    auto const cmd = cli + " " + args + " > " + path( "stdout.txt" ) + " 2> " + path( "stderr.txt" );
    int const raw = std::system( cmd.c_str() );
    run_result r;
    r.code = WIFEXITED( raw ) ? WEXITSTATUS( raw ) : -1;
    r.out = slurp( "stdout.txt" );
    return r;
  }

  /* value of `key: value` in machine output */
  static std::string field( std::string const& out, std::string const& key )
  {
    std::istringstream in( out );
    std::string line;
    while ( std::getline( in, line ) )
      if ( line.rfind( key + ": ", 0 ) == 0 )
        return line.substr( key.size() + 2 );
    return {};
  }

  fs::path dir_;
};

TEST_F( Cli, LearnSucceedsOrReportsUnsat )
{
  auto const ok = run( "learn " + path( "traces.txt" ) + " --output machine" );
  EXPECT_EQ( ok.code, 0 ) << ok.out;
  EXPECT_EQ( field( ok.out, "status" ), "solved" ) << ok.out;
  EXPECT_FALSE( field( ok.out, "formula" ).empty() );
  EXPECT_EQ( run( "learn " + path( "traces.txt" ) + " -n 1" ).code, 1 );
}

TEST_F( Cli, InputErrorsExitWithTwo )
{
  EXPECT_EQ( run( "learn " + path( "missing.txt" ) ).code, 2 );
  EXPECT_EQ( run( "learn " + path( "traces.txt" ) + " -p no-such-preset" ).code, 2 );
  put( "bad.txt", "constraint root in ;\n" );
  EXPECT_EQ( run( "learn " + path( "traces.txt" ) + " -c " + path( "bad.txt" ) ).code, 2 );
  EXPECT_EQ( run( "oracle " + path( "traces.txt" ) + " -s 9" ).code, 2 );
  EXPECT_EQ( run( "learn" ).code, 2 );
}

TEST_F( Cli, TimeoutExitsWithThree )
{
  auto const dir = suites + "/robot-repair/";
  auto const r = run( "learn " + dir + "traces.txt -c " + dir + "constraints.txt -n 9 --timeout 0.05 --output machine" );
  EXPECT_EQ( r.code, 3 ) << r.out;
  EXPECT_EQ( field( r.out, "status" ), "timeout" ) << r.out;
}

TEST_F( Cli, VerifyPassAndFail )
{
  EXPECT_EQ( run( "verify " + path( "traces.txt" ) + " -f 'F p'" ).code, 0 );
  EXPECT_EQ( run( "verify " + path( "traces.txt" ) + " -f 'G p'" ).code, 1 );
  EXPECT_EQ( run( "verify " + path( "traces.txt" ) + " -f 'F (p'" ).code, 2 );
}

TEST_F( Cli, EnumerateAndOracle )
{
  EXPECT_EQ( run( "enumerate " + path( "traces.txt" ) + " --limit 0" ).code, 0 );
  auto const e = run( "enumerate " + path( "traces.txt" ) + " --limit 3 --output machine" );
  EXPECT_EQ( e.code, 0 ) << e.out;
  auto const o = run( "oracle " + path( "traces.txt" ) + " -s 3 --output machine" );
  EXPECT_EQ( o.code, 0 ) << o.out;
  EXPECT_EQ( field( o.out, "tree-size" ), "2" ) << o.out;
}

/*
  Exports the instance, solves the weighted file independently of the CLI
  (soft clauses grouped by weight, heaviest first) and imports the model.
*/
TEST_F( Cli, WcnfExportImportRoundTrip )
{
  auto const learned = run( "learn " + path( "traces.txt" ) + " -n 3 --output machine" );
  ASSERT_EQ( learned.code, 0 ) << learned.out;

  ASSERT_EQ( run( "export-wcnf " + path( "traces.txt" ) + " -n 3 --wcnf " + path( "out.wcnf" ) ).code, 0 );
  auto const text = slurp( "out.wcnf" );
  ASSERT_EQ( text.rfind( "p wcnf ", 0 ), 0u );
  EXPECT_TRUE( fs::exists( path( "out.wcnf.vars" ) ) );

  auto const w = read_wcnf( text );
  std::map<uint64_t, std::vector<int>, std::greater<>> by_weight;
  int vars = w.num_vars;
  std::vector<clause> hard = w.hard;
  for ( auto const& [weight, c] : w.soft )
  {
    /* relax each soft clause with a fresh selector that is true when it is violated */
    int const r = ++vars;
    auto relaxed = c;
    relaxed.push_back( r );
    hard.push_back( relaxed );
    by_weight[weight].push_back( -r );
  }
  problem_cnf p;
  for ( int v = 0; v < vars; ++v )
    p.vars.add( { var_kind::aux } );
  p.hard = hard;
  uint32_t priority = static_cast<uint32_t>( by_weight.size() );
  for ( auto& [weight, lits] : by_weight )
    p.layers.push_back( { priority--, lits, 0 } );
  auto const r = solve_lex( p );
  ASSERT_EQ( r.status, solve_status::optimum );
  assignment model( r.model.begin(), r.model.begin() + w.num_vars + 1 );
  put( "model.txt", "s OPTIMUM FOUND\n" + render_model( model, w.num_vars ) );

  auto const imported = run( "import-model " + path( "traces.txt" ) + " -n 3 --model " + path( "model.txt" ) + " --output machine" );
  EXPECT_EQ( imported.code, 0 ) << imported.out;
  EXPECT_EQ( field( imported.out, "nodes" ), field( learned.out, "nodes" ) ) << imported.out;
  EXPECT_EQ( field( imported.out, "cost[1]" ), field( learned.out, "cost[1]" ) ) << imported.out;
  EXPECT_EQ( field( imported.out, "check.sample" ), "pass" ) << imported.out;

  put( "unsat.txt", "s UNSATISFIABLE\n" );
  EXPECT_EQ( run( "import-model " + path( "traces.txt" ) + " -n 3 --model " + path( "unsat.txt" ) ).code, 1 );
}

TEST_F( Cli, BenchRunsTheShippedSuites )
{
  auto const r = run( "bench --suites " + suites + " voting peterson-mutex --output machine" );
  EXPECT_EQ( r.code, 0 ) << r.out;
}

} // namespace
