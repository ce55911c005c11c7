/*!
  \file encoder.hpp
  \brief CNF encoding of bounded LTL learning under syntactic constraints

  Slot i of the bounded DAG carries `used(i)`, one `label(i, k)` per label
  index and child variables `childL(i, j)`, `childR(i, j)` for j < i. Used
  slots form a prefix and the highest used slot is the root. `sem(t, i, k)`
  holds when the subformula at slot i is true at position k of trace t.
*/

#pragma once

#include "bool_expr.hpp"
#include "constraint/eval.hpp"
#include "constraint/parser.hpp"
#include "constraint/prelude.hpp"
#include "eval.hpp"
#include "ground.hpp"
#include "trace.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace cltl
{

class encoding_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Raised when a model does not decode to a valid solution; indicates a defect in the encoding. */
class decode_error : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

struct encoding_config
{
  std::size_t max_nodes = 1;
  bool default_size = true; /* softempty[1] L + R */
  bool tree_mode = false;   /* adds the no-dag-reuse preset */
};

enum class var_kind : uint8_t
{
  used,        /* a = slot */
  label,       /* a = slot, b = label index */
  child_l,     /* a = parent, b = child */
  child_r,
  node_const,  /* a = declared node, b = slot */
  sem,         /* a = trace, b = slot, c = position */
  left_value,  /* sem of the left child: a = trace, b = slot, c = position */
  right_value,
  aux,         /* Tseitin definitions and counters */
};

struct var_meaning
{
  var_kind kind = var_kind::aux;
  uint32_t a = 0, b = 0, c = 0;
};

/*! \brief Two-way map between solver variables (1-based) and what they mean. */
class var_map
{
public:
  int add( var_meaning m )
  {
    meanings_.push_back( m );
    return static_cast<int>( meanings_.size() );
  }

  int num_vars() const noexcept { return static_cast<int>( meanings_.size() ); }
  var_meaning const& meaning( int v ) const { return meanings_.at( static_cast<std::size_t>( v - 1 ) ); }

  bool is_structural( int v ) const
  {
    auto const k = meaning( v ).kind;
    return k == var_kind::used || k == var_kind::label || k == var_kind::child_l || k == var_kind::child_r;
  }

  std::size_t n = 0, num_labels = 0;
  std::vector<int> used;
  std::vector<std::vector<int>> label, child_l, child_r, node_const; /* 0 where absent */
  std::vector<std::vector<std::vector<int>>> sem, left_value, right_value; /* [trace][slot][position] */

  std::string describe( int v, prop_list const& ap, constraint::program const& p ) const
  {
    auto const& m = meaning( v );
    auto const s = []( uint32_t x ) { return std::to_string( x ); };
    switch ( m.kind )
    {
    case var_kind::used: return "used(" + s( m.a ) + ")";
    case var_kind::label: return "label(" + s( m.a ) + "," + label_name( label::from_index( m.b ), ap ) + ")";
    case var_kind::child_l: return "childL(" + s( m.a ) + "," + s( m.b ) + ")";
    case var_kind::child_r: return "childR(" + s( m.a ) + "," + s( m.b ) + ")";
    case var_kind::node_const: return "node(" + p.nodes.at( m.a ).name + "," + s( m.b ) + ")";
    case var_kind::sem: return "sem(" + s( m.a ) + "," + s( m.b ) + "," + s( m.c ) + ")";
    case var_kind::left_value: return "lval(" + s( m.a ) + "," + s( m.b ) + "," + s( m.c ) + ")";
    case var_kind::right_value: return "rval(" + s( m.a ) + "," + s( m.b ) + "," + s( m.c ) + ")";
    case var_kind::aux: break;
    }
    return "aux";
  }

private:
  std::vector<var_meaning> meanings_;
};

struct soft_layer
{
  uint32_t priority = 1;
  std::vector<int> lits; /* each should be true; a false one costs 1 */
  int64_t offset = 0;    /* cost that no model avoids */
};

struct problem_cnf
{
  std::vector<clause> hard;
  std::vector<soft_layer> layers; /* priority-descending */
  var_map vars;
  encoding_config config;
  constraint::program program; /* with the presets and default objective that were applied */
  std::size_t num_props = 0;

  /* Tseitin definitions over the structural and node variables, for rebuilding assignments */
  std::shared_ptr<bool_builder> builder;
  std::vector<std::pair<int, bexpr>> definitions;
  int true_var = 0;
};

/*! \brief Program actually encoded: the user program plus the tree preset and the size objective when enabled. */
inline constraint::program effective_program( constraint::program const& p, encoding_config const& cfg, prop_list const& ap )
{
  auto out = p;
  if ( cfg.tree_mode )
    out = constraint::merge_programs( { p, constraint::preset( "no-dag-reuse", ap ) }, ap );
  if ( cfg.default_size )
    constraint::add_default_objective( out );
  return out;
}

namespace detail
{

class encoder
{
public:
  encoder( sample const& s, constraint::program const& p, encoding_config const& cfg ) : s_( s )
  {
    if ( cfg.max_nodes < 1 )
      throw encoding_error( "node bound must be at least 1" );
    if ( cfg.max_nodes < 1 + p.nodes.size() )
      throw encoding_error( "bound too small: " + std::to_string( p.nodes.size() ) + " declared nodes need at least " +
                            std::to_string( 1 + p.nodes.size() ) + " slots" );
    out_.config = cfg;
    out_.program = effective_program( p, cfg, s.ap() );
    out_.num_props = s.ap().size();
    out_.builder = std::make_shared<bool_builder>();
    n_ = cfg.max_nodes;
    nl_ = num_operators + out_.num_props;
  }

  problem_cnf run()
  {
    allocate();
    structure();
    semantics();
    sample_clauses();
    constraints();
    return std::move( out_ );
  }

private:
  var_map& vm() { return out_.vars; }
  void add( clause c ) { out_.hard.push_back( std::move( c ) ); }
  int lbl( std::size_t i, label l ) { return vm().label[i][l.index()]; }
  int lbl( std::size_t i, op o ) { return lbl( i, label::of_op( o ) ); }

  void allocate()
  {
    auto& m = vm();
    auto const u32 = []( std::size_t x ) { return static_cast<uint32_t>( x ); };
    m.n = n_;
    m.num_labels = nl_;
    for ( std::size_t i = 0; i < n_; ++i )
      m.used.push_back( m.add( { var_kind::used, u32( i ) } ) );
    m.label.assign( n_, {} );
    m.child_l.assign( n_, std::vector<int>( n_, 0 ) );
    m.child_r.assign( n_, std::vector<int>( n_, 0 ) );
    for ( std::size_t i = 0; i < n_; ++i )
    {
      for ( std::size_t k = 0; k < nl_; ++k )
        m.label[i].push_back( m.add( { var_kind::label, u32( i ), u32( k ) } ) );
      for ( std::size_t j = 0; j < i; ++j )
      {
        m.child_l[i][j] = m.add( { var_kind::child_l, u32( i ), u32( j ) } );
        m.child_r[i][j] = m.add( { var_kind::child_r, u32( i ), u32( j ) } );
      }
    }
    m.node_const.assign( out_.program.nodes.size(), {} );
    for ( std::size_t c = 0; c < out_.program.nodes.size(); ++c )
      for ( std::size_t i = 0; i < n_; ++i )
        m.node_const[c].push_back( m.add( { var_kind::node_const, u32( c ), u32( i ) } ) );

    auto const traces = s_.size();
    m.sem.assign( traces, {} );
    m.left_value.assign( traces, {} );
    m.right_value.assign( traces, {} );
    for ( std::size_t t = 0; t < traces; ++t )
    {
      auto const len = s_.trace( t ).length();
      m.sem[t].assign( n_, std::vector<int>( len, 0 ) );
      m.left_value[t].assign( n_, std::vector<int>( len, 0 ) );
      m.right_value[t].assign( n_, std::vector<int>( len, 0 ) );
      for ( std::size_t i = 0; i < n_; ++i )
        for ( std::size_t k = 0; k < len; ++k )
          m.sem[t][i][k] = m.add( { var_kind::sem, u32( t ), u32( i ), u32( k ) } );
      /* slot 0 has no children */
      for ( std::size_t i = 1; i < n_; ++i )
        for ( std::size_t k = 0; k < len; ++k )
        {
          m.left_value[t][i][k] = m.add( { var_kind::left_value, u32( t ), u32( i ), u32( k ) } );
          m.right_value[t][i][k] = m.add( { var_kind::right_value, u32( t ), u32( i ), u32( k ) } );
        }
    }

    /* the symbolic view used by the grounder */
    auto& b = *out_.builder;
    u_.n = n_;
    u_.num_props = out_.num_props;
    auto as_expr = [&]( int v ) { return v ? b.var( v ) : bfalse; };
    for ( auto v : m.used )
      u_.used.push_back( as_expr( v ) );
    u_.labels.assign( n_, {} );
    u_.child_l.assign( n_, std::vector<bexpr>( n_, bfalse ) );
    u_.child_r.assign( n_, std::vector<bexpr>( n_, bfalse ) );
    for ( std::size_t i = 0; i < n_; ++i )
    {
      for ( auto v : m.label[i] )
        u_.labels[i].push_back( as_expr( v ) );
      for ( std::size_t j = 0; j < n_; ++j )
      {
        u_.child_l[i][j] = as_expr( m.child_l[i][j] );
        u_.child_r[i][j] = as_expr( m.child_r[i][j] );
      }
    }
    u_.consts.assign( m.node_const.size(), {} );
    for ( std::size_t c = 0; c < m.node_const.size(); ++c )
      for ( auto v : m.node_const[c] )
        u_.consts[c].push_back( as_expr( v ) );
  }

  void at_most_one( std::vector<int> const& xs )
  {
    for ( std::size_t a = 0; a < xs.size(); ++a )
      for ( std::size_t b = a + 1; b < xs.size(); ++b )
        add( { -xs[a], -xs[b] } );
  }

  void structure()
  {
    auto& m = vm();
    add( { m.used[0] } );
    for ( std::size_t i = 0; i + 1 < n_; ++i )
      add( { -m.used[i + 1], m.used[i] } );

    for ( std::size_t i = 0; i < n_; ++i )
    {
      auto const u = m.used[i];
      clause some_label{ -u };
      for ( auto l : m.label[i] )
      {
        some_label.push_back( l );
        add( { u, -l } );
      }
      add( some_label );
      at_most_one( m.label[i] );

      std::vector<int> ls, rs;
      for ( std::size_t j = 0; j < i; ++j )
      {
        ls.push_back( m.child_l[i][j] );
        rs.push_back( m.child_r[i][j] );
        add( { u, -m.child_l[i][j] } );
        add( { u, -m.child_r[i][j] } );
      }
      at_most_one( ls );
      at_most_one( rs );

      for ( std::size_t k = 0; k < nl_; ++k )
      {
        auto const l = m.label[i][k];
        auto const a = arity( label::from_index( static_cast<uint32_t>( k ) ).kind );
        if ( a >= 1 )
        {
          clause need{ -l };
          need.insert( need.end(), ls.begin(), ls.end() );
          add( need );
        }
        else
          for ( auto c : ls )
            add( { -l, -c } );
        if ( a == 2 )
        {
          clause need{ -l };
          need.insert( need.end(), rs.begin(), rs.end() );
          add( need );
        }
        else
          for ( auto c : rs )
            add( { -l, -c } );
      }
    }

    /* each proposition labels at most one slot */
    for ( std::size_t p = 0; p < out_.num_props; ++p )
    {
      std::vector<int> xs;
      for ( std::size_t i = 0; i < n_; ++i )
        xs.push_back( m.label[i][num_operators + p] );
      at_most_one( xs );
    }

    /* every used slot below the root has a parent, so used slots are exactly the reachable ones */
    for ( std::size_t i = 0; i + 1 < n_; ++i )
    {
      clause parent{ -m.used[i + 1] };
      for ( std::size_t j = i + 1; j < n_; ++j )
      {
        parent.push_back( m.child_l[j][i] );
        parent.push_back( m.child_r[j][i] );
      }
      add( parent );
    }
  }

  void semantics()
  {
    auto& m = vm();
    for ( std::size_t t = 0; t < s_.size(); ++t )
    {
      auto const& tr = s_.trace( t );
      auto const len = tr.length();
      std::vector<std::vector<std::size_t>> fut( len );
      for ( std::size_t k = 0; k < len; ++k )
        fut[k] = tr.future_indices( k );

      for ( std::size_t i = 0; i < n_; ++i )
      {
        auto const& S = m.sem[t][i];
        for ( std::size_t k = 0; k < len; ++k )
          add( { m.used[i], -S[k] } );

        for ( std::size_t p = 0; p < out_.num_props; ++p )
        {
          auto const g = lbl( i, label::of_prop( static_cast<uint32_t>( p ) ) );
          for ( std::size_t k = 0; k < len; ++k )
            add( { -g, tr.value( k, static_cast<uint32_t>( p ) ) ? S[k] : -S[k] } );
        }
        if ( i == 0 )
          continue;

        auto const& L = m.left_value[t][i];
        auto const& R = m.right_value[t][i];
        for ( std::size_t k = 0; k < len; ++k )
        {
          clause any_l{ -L[k] }, any_r{ -R[k] };
          for ( std::size_t j = 0; j < i; ++j )
          {
            auto const cl = m.child_l[i][j], cr = m.child_r[i][j];
            auto const sj = m.sem[t][j][k];
            add( { -cl, -L[k], sj } );
            add( { -cl, L[k], -sj } );
            add( { -cr, -R[k], sj } );
            add( { -cr, R[k], -sj } );
            any_l.push_back( cl );
            any_r.push_back( cr );
          }
          add( any_l );
          add( any_r );
        }

        int const g_not = lbl( i, op::not_ ), g_and = lbl( i, op::and_ ), g_or = lbl( i, op::or_ ),
                  g_imp = lbl( i, op::implies ), g_x = lbl( i, op::next ), g_f = lbl( i, op::finally ),
                  g_g = lbl( i, op::globally ), g_u = lbl( i, op::until );
        for ( std::size_t k = 0; k < len; ++k )
        {
          auto const s = S[k], l = L[k], r = R[k];
          auto const next = tr.succ( k );

          add( { -g_not, -s, -l } );
          add( { -g_not, s, l } );

          add( { -g_and, -s, l } );
          add( { -g_and, -s, r } );
          add( { -g_and, s, -l, -r } );

          add( { -g_or, -s, l, r } );
          add( { -g_or, s, -l } );
          add( { -g_or, s, -r } );

          add( { -g_imp, -s, -l, r } );
          add( { -g_imp, s, l } );
          add( { -g_imp, s, -r } );

          add( { -g_x, -s, L[next] } );
          add( { -g_x, s, -L[next] } );

          clause f_some{ -g_f, -s }, g_all{ -g_g, s }, u_some{ -g_u, -s };
          for ( auto k2 : fut[k] )
          {
            f_some.push_back( L[k2] );
            add( { -g_f, s, -L[k2] } );
            add( { -g_g, -s, L[k2] } );
            g_all.push_back( -L[k2] );
            u_some.push_back( R[k2] );
          }
          add( f_some );
          add( g_all );

          /* s <-> eventually r and (r or (l and s at succ)); the eventuality at succ implies the one at k */
          add( u_some );
          add( { -g_u, -s, r, l } );
          add( { -g_u, -s, r, S[next] } );
          add( { -g_u, -r, s } );
          add( { -g_u, -l, -S[next], s } );
        }
      }
    }
  }

  void sample_clauses()
  {
    auto& m = vm();
    for ( std::size_t t = 0; t < s_.size(); ++t )
    {
      bool const pos = s_.is_positive( t );
      for ( std::size_t r = 0; r < n_; ++r )
      {
        auto const s0 = m.sem[t][r][0];
        clause c{ -m.used[r] };
        if ( r + 1 < n_ )
          c.push_back( m.used[r + 1] );
        c.push_back( pos ? s0 : -s0 );
        add( c );
      }
    }
  }

  void constraints()
  {
    auto& b = *out_.builder;
    auto const& p = out_.program;
    cnf_sink sink( b, [&] { return vm().add( { var_kind::aux } ); }, out_.hard );

    /* declared nodes: one slot each, inside the domain, pairwise distinct */
    auto& m = vm();
    for ( std::size_t c = 0; c < p.nodes.size(); ++c )
    {
      auto const dom = ground_expr( p, *p.nodes[c].domain, u_, b );
      clause one( m.node_const[c].begin(), m.node_const[c].end() );
      add( one );
      at_most_one( m.node_const[c] );
      for ( std::size_t i = 0; i < n_; ++i )
        sink.assert_true( b.implies( b.var( m.node_const[c][i] ), dom.cells[i] ) );
      for ( std::size_t d = 0; d < c; ++d )
        for ( std::size_t i = 0; i < n_; ++i )
          add( { -m.node_const[c][i], -m.node_const[d][i] } );
    }

    for ( auto const& f : p.constraints )
      sink.assert_true( ground_formula( p, *f, u_, b ) );

    for ( auto k : p.priorities() )
    {
      soft_layer layer;
      layer.priority = k;
      for ( auto const& o : p.objectives )
      {
        if ( o.priority != k )
          continue;
        auto const g = ground_objective( p, o, u_, b );
        layer.offset += g.offset;
        for ( auto const& e : g.soft )
          layer.lits.push_back( sink.to_lit( e ) );
      }
      out_.layers.push_back( std::move( layer ) );
    }

    out_.definitions = sink.definitions();
    out_.true_var = sink.true_var();
  }

  sample const& s_;
  problem_cnf out_;
  symbolic_universe u_;
  std::size_t n_ = 0, nl_ = 0;
};

} // namespace detail

/*! \brief Encodes the learning problem at the configured node bound. */
inline problem_cnf encode_full( sample const& s, constraint::program const& p, encoding_config const& cfg )
{
  return detail::encoder( s, p, cfg ).run();
}

struct decoded_solution
{
  syntax_dag dag;
  constraint::witness w; /* slot of each declared node */
};

using assignment = std::vector<char>; /* indexed by variable, entry 0 unused */

/*! \brief Reads the DAG and node witness out of a model, checking it against the sample. */
inline decoded_solution decode( assignment const& model, problem_cnf const& p, sample const& s )
{
  auto const& m = p.vars;
  auto val = [&]( int v ) { return v > 0 && static_cast<std::size_t>( v ) < model.size() && model[v]; };

  std::size_t used = 0;
  while ( used < m.n && val( m.used[used] ) )
    ++used;
  for ( std::size_t i = used; i < m.n; ++i )
    if ( val( m.used[i] ) )
      throw decode_error( "used slots are not a prefix" );
  if ( used == 0 )
    throw decode_error( "no used slot" );

  decoded_solution out;
  for ( std::size_t i = 0; i < used; ++i )
  {
    std::optional<label> lbl;
    for ( std::size_t k = 0; k < m.num_labels; ++k )
      if ( val( m.label[i][k] ) )
      {
        if ( lbl )
          throw decode_error( "slot " + std::to_string( i ) + " has several labels" );
        lbl = label::from_index( static_cast<uint32_t>( k ) );
      }
    if ( !lbl )
      throw decode_error( "slot " + std::to_string( i ) + " has no label" );
    dag_node nd{ *lbl, std::nullopt, std::nullopt };
    for ( std::size_t j = 0; j < i; ++j )
    {
      if ( val( m.child_l[i][j] ) )
      {
        if ( nd.left )
          throw decode_error( "slot " + std::to_string( i ) + " has several left children" );
        nd.left = static_cast<uint32_t>( j );
      }
      if ( val( m.child_r[i][j] ) )
      {
        if ( nd.right )
          throw decode_error( "slot " + std::to_string( i ) + " has several right children" );
        nd.right = static_cast<uint32_t>( j );
      }
    }
    out.dag.nodes.push_back( nd );
  }
  out.dag.root = static_cast<uint32_t>( used - 1 );
  try
  {
    out.dag.validate( p.num_props );
  }
  catch ( std::logic_error const& e )
  {
    throw decode_error( e.what() );
  }

  for ( std::size_t c = 0; c < m.node_const.size(); ++c )
  {
    std::optional<uint32_t> slot;
    for ( std::size_t i = 0; i < m.n; ++i )
      if ( val( m.node_const[c][i] ) )
        slot = static_cast<uint32_t>( i );
    if ( !slot || *slot >= used )
      throw decode_error( "declared node " + p.program.nodes[c].name + " is not placed on a used slot" );
    out.w.push_back( *slot );
  }

  /* the root's sem literals must match the independent evaluator */
  for ( std::size_t t = 0; t < s.size(); ++t )
  {
    bool const truth = evaluate( out.dag, s.trace( t ), 0 );
    if ( truth != val( m.sem[t][out.dag.root][0] ) )
      throw decode_error( "evaluator disagrees with the model on trace " + std::to_string( t ) );
    if ( truth != s.is_positive( t ) )
      throw decode_error( "decoded formula misclassifies trace " + std::to_string( t ) );
  }
  return out;
}

/*! \brief Renumbers the reachable nodes so that children precede parents and the root comes last. */
inline syntax_dag to_slot_form( syntax_dag const& d )
{
  auto const order = d.topological_order();
  std::vector<uint32_t> index( d.nodes.size(), 0 );
  for ( uint32_t k = 0; k < order.size(); ++k )
    index[order[k]] = k;
  syntax_dag out;
  for ( auto n : order )
  {
    auto nd = d.nodes[n];
    if ( nd.left )
      nd.left = index[*nd.left];
    if ( nd.right )
      nd.right = index[*nd.right];
    out.nodes.push_back( nd );
  }
  out.root = static_cast<uint32_t>( order.size() - 1 );
  return out;
}

/*!
  \brief The full assignment that represents a DAG in slot form with the given node witness.

  Structural, semantic and definition variables are all set; the result satisfies
  every hard clause exactly when the DAG is a solution within the bound.
*/
inline assignment assignment_from_dag( problem_cnf const& p, sample const& s, syntax_dag const& d, constraint::witness const& w = {} )
{
  auto const& m = p.vars;
  if ( d.nodes.size() > m.n )
    throw std::invalid_argument( "DAG has more nodes than the bound" );
  assignment a( static_cast<std::size_t>( m.num_vars() ) + 1, 0 );
  auto set = [&]( int v, bool x ) {
    if ( v )
      a[v] = x;
  };

  for ( std::size_t i = 0; i < d.nodes.size(); ++i )
  {
    auto const& nd = d.nodes[i];
    set( m.used[i], true );
    set( m.label[i][nd.lbl.index()], true );
    if ( nd.left )
      set( m.child_l[i][*nd.left], true );
    if ( nd.right )
      set( m.child_r[i][*nd.right], true );
  }
  for ( std::size_t c = 0; c < w.size() && c < m.node_const.size(); ++c )
    set( m.node_const[c][w[c]], true );

  for ( std::size_t t = 0; t < s.size(); ++t )
  {
    auto const rows = truth_table( d, s.trace( t ) );
    for ( std::size_t i = 0; i < d.nodes.size(); ++i )
    {
      auto const& nd = d.nodes[i];
      for ( std::size_t k = 0; k < rows[i].size(); ++k )
      {
        set( m.sem[t][i][k], rows[i][k] );
        if ( nd.left )
          set( m.left_value[t][i][k], rows[*nd.left][k] );
        if ( nd.right )
          set( m.right_value[t][i][k], rows[*nd.right][k] );
      }
    }
  }

  auto const all = p.builder->evaluate_all( [&]( int v ) { return a[v] != 0; } );
  for ( auto const& [v, e] : p.definitions )
    a[v] = bool_builder::value_of( all, e );
  if ( p.true_var )
    a[p.true_var] = 1;
  return a;
}

/*!
  \brief Clause excluding exactly the structure of this assignment.

  Negates the true structural literals and adds the first unused slot
  positively; without it every larger DAG extending this one would be
  excluded as well.
*/
inline clause blocking_clause( problem_cnf const& p, assignment const& a )
{
  clause block;
  auto const& m = p.vars;
  for ( int v = 1; v <= m.num_vars() && static_cast<std::size_t>( v ) < a.size(); ++v )
    if ( m.is_structural( v ) && a[v] )
      block.push_back( -v );
  for ( auto u : m.used )
    if ( !a[u] )
    {
      block.push_back( u );
      break;
    }
  return block;
}

/*! \brief Clause excluding a DAG in slot form, in the same way as `blocking_clause`. */
inline clause structure_blocking_clause( problem_cnf const& p, syntax_dag const& d )
{
  auto const& m = p.vars;
  clause block;
  for ( std::size_t i = 0; i < d.nodes.size(); ++i )
  {
    auto const& nd = d.nodes[i];
    block.push_back( -m.used[i] );
    block.push_back( -m.label[i][nd.lbl.index()] );
    if ( nd.left )
      block.push_back( -m.child_l[i][*nd.left] );
    if ( nd.right )
      block.push_back( -m.child_r[i][*nd.right] );
  }
  if ( d.nodes.size() < m.n )
    block.push_back( m.used[d.nodes.size()] );
  return block;
}

/*!
  \brief Every slot form of the same DAG, up to `limit` of them.

  A slot form numbers children below parents and puts the root last; the
  numberings are the topological orders of the reachable nodes.
*/
inline std::vector<syntax_dag> slot_renumberings( syntax_dag const& d, std::size_t limit = 100000 )
{
  auto const nodes = d.reachable();
  std::vector<uint32_t> pos( d.nodes.size(), UINT32_MAX );
  std::vector<uint32_t> order;
  std::vector<syntax_dag> out;
  auto ready = [&]( uint32_t n ) {
    auto const& nd = d.nodes[n];
    return pos[n] == UINT32_MAX && ( !nd.left || pos[*nd.left] != UINT32_MAX ) &&
           ( !nd.right || pos[*nd.right] != UINT32_MAX );
  };
  std::function<void()> rec = [&]() {
    if ( out.size() >= limit )
      return;
    if ( order.size() == nodes.size() )
    {
      syntax_dag r;
      for ( auto n : order )
      {
        auto nd = d.nodes[n];
        if ( nd.left )
          nd.left = pos[*nd.left];
        if ( nd.right )
          nd.right = pos[*nd.right];
        r.nodes.push_back( nd );
      }
      r.root = static_cast<uint32_t>( order.size() - 1 );
      out.push_back( std::move( r ) );
      return;
    }
    for ( auto n : nodes )
      if ( ready( n ) )
      {
        pos[n] = static_cast<uint32_t>( order.size() );
        order.push_back( n );
        rec();
        order.pop_back();
        pos[n] = UINT32_MAX;
      }
  };
  rec();
  return out;
}

/*! \brief Whether every clause has a true literal under the assignment. */
inline bool satisfies( std::vector<clause> const& cnf, assignment const& a )
{
  for ( auto const& c : cnf )
  {
    bool sat = false;
    for ( auto l : c )
      if ( ( l > 0 ) == ( a[std::abs( l )] != 0 ) )
      {
        sat = true;
        break;
      }
    if ( !sat )
      return false;
  }
  return true;
}

/*! \brief Per-layer cost of an assignment (violated soft literals plus the fixed offset). */
inline std::vector<int64_t> layer_costs( problem_cnf const& p, assignment const& a )
{
  std::vector<int64_t> out;
  for ( auto const& layer : p.layers )
  {
    int64_t c = layer.offset;
    for ( auto l : layer.lits )
      c += ( l > 0 ) != ( a[std::abs( l )] != 0 );
    out.push_back( c );
  }
  return out;
}

} // namespace cltl
