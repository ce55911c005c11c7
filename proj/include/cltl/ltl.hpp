/*!
  \file ltl.hpp
  \brief LTL formulas as trees and as syntax DAGs, with a text parser and printer
*/

#pragma once

#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace cltl
{

/*! \brief Input error carrying a 1-based line/column position (0 if unknown). */
class parse_error : public std::runtime_error
{
public:
  parse_error( std::string const& msg, std::size_t line = 0, std::size_t column = 0 )
      : std::runtime_error( line ? std::to_string( line ) + ":" + std::to_string( column ) + ": " + msg : msg ),
        line_( line ), column_( column )
  {
  }

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

struct prop
{
  std::string name;
  uint32_t index = 0;

  bool operator==( prop const& ) const = default;
};

/*! \brief Ordered set of atomic propositions; lookups by name. */
class prop_list
{
public:
  prop_list() = default;

  explicit prop_list( std::vector<std::string> const& names )
  {
    for ( auto const& n : names )
      add( n );
  }

  uint32_t add( std::string const& name )
  {
    if ( !is_valid_name( name ) )
      throw parse_error( "invalid proposition name '" + name + "'" );
    if ( by_name_.count( name ) )
      throw parse_error( "duplicate proposition '" + name + "'" );
    auto const idx = static_cast<uint32_t>( props_.size() );
    props_.push_back( { name, idx } );
    by_name_.emplace( name, idx );
    return idx;
  }

  std::optional<uint32_t> find( std::string_view name ) const
  {
    auto it = by_name_.find( std::string( name ) );
    if ( it == by_name_.end() )
      return std::nullopt;
    return it->second;
  }

  std::size_t size() const noexcept { return props_.size(); }
  prop const& operator[]( std::size_t i ) const { return props_[i]; }
  auto begin() const { return props_.begin(); }
  auto end() const { return props_.end(); }

  std::vector<std::string> names() const
  {
    std::vector<std::string> out;
    for ( auto const& p : props_ )
      out.push_back( p.name );
    return out;
  }

  bool operator==( prop_list const& o ) const { return props_ == o.props_; }

  /* G, F, X and U are operators in the formula grammar */
  static bool is_reserved( std::string_view name )
  {
    return name == "G" || name == "F" || name == "X" || name == "U";
  }

  static bool is_valid_name( std::string_view name )
  {
    if ( name.empty() || is_reserved( name ) )
      return false;
    auto const first = name.front();
    if ( !( std::isalpha( static_cast<unsigned char>( first ) ) || first == '_' ) )
      return false;
    for ( char c : name )
      if ( !( std::isalnum( static_cast<unsigned char>( c ) ) || c == '_' ) )
        return false;
    return true;
  }

private:
  std::vector<prop> props_;
  std::unordered_map<std::string, uint32_t> by_name_;
};

enum class op : uint8_t
{
  globally,
  finally,
  next,
  until,
  and_,
  or_,
  implies,
  not_,
  atom,
};

inline constexpr std::size_t num_operators = 8; /* every op except atom */

inline uint32_t arity( op o )
{
  switch ( o )
  {
  case op::until:
  case op::and_:
  case op::or_:
  case op::implies:
    return 2;
  case op::globally:
  case op::finally:
  case op::next:
  case op::not_:
    return 1;
  case op::atom:
    return 0;
  }
  return 0;
}

inline bool is_temporal( op o )
{
  return o == op::globally || o == op::finally || o == op::next || o == op::until;
}

inline std::string_view op_symbol( op o )
{
  switch ( o )
  {
  case op::globally: return "G";
  case op::finally: return "F";
  case op::next: return "X";
  case op::until: return "U";
  case op::and_: return "&";
  case op::or_: return "|";
  case op::implies: return "->";
  case op::not_: return "!";
  case op::atom: return "atom";
  }
  return "?";
}

/*! \brief Node label of a syntax DAG: an operator or a proposition.

  Labels are numbered 0..7 for the operators (in `op` order) and 8+p for
  proposition p. The encoder uses the same numbering for its label variables.
*/
struct label
{
  op kind = op::atom;
  uint32_t prop = 0;

  static label of_op( op o ) { return { o, 0 }; }
  static label of_prop( uint32_t p ) { return { op::atom, p }; }

  uint32_t index() const { return kind == op::atom ? static_cast<uint32_t>( num_operators ) + prop : static_cast<uint32_t>( kind ); }

  static label from_index( uint32_t i )
  {
    return i < num_operators ? of_op( static_cast<op>( i ) ) : of_prop( i - static_cast<uint32_t>( num_operators ) );
  }

  bool operator==( label const& ) const = default;
  auto operator<=>( label const& o ) const { return index() <=> o.index(); }
};

class formula;
using formula_ptr = std::shared_ptr<formula const>;

/*! \brief Immutable LTL syntax tree node. Share freely. */
class formula
{
public:
  static formula_ptr make_atom( uint32_t p ) { return formula_ptr( new formula( op::atom, p, nullptr, nullptr ) ); }

  static formula_ptr make_unary( op o, formula_ptr sub )
  {
    if ( arity( o ) != 1 || !sub )
      throw std::invalid_argument( "make_unary: bad operator or child" );
    return formula_ptr( new formula( o, 0, std::move( sub ), nullptr ) );
  }

  static formula_ptr make_binary( op o, formula_ptr lhs, formula_ptr rhs )
  {
    if ( arity( o ) != 2 || !lhs || !rhs )
      throw std::invalid_argument( "make_binary: bad operator or children" );
    return formula_ptr( new formula( o, 0, std::move( lhs ), std::move( rhs ) ) );
  }

  static formula_ptr make( label l, formula_ptr lhs = nullptr, formula_ptr rhs = nullptr )
  {
    switch ( arity( l.kind ) )
    {
    case 0: return make_atom( l.prop );
    case 1: return make_unary( l.kind, std::move( lhs ) );
    default: return make_binary( l.kind, std::move( lhs ), std::move( rhs ) );
    }
  }

  op kind() const noexcept { return kind_; }
  uint32_t prop() const noexcept { return prop_; }
  label get_label() const noexcept { return { kind_, kind_ == op::atom ? prop_ : 0 }; }
  formula_ptr const& left() const noexcept { return left_; }
  formula_ptr const& right() const noexcept { return right_; }

private:
  formula( op k, uint32_t p, formula_ptr l, formula_ptr r )
      : kind_( k ), prop_( p ), left_( std::move( l ) ), right_( std::move( r ) )
  {
  }

  op kind_;
  uint32_t prop_;
  formula_ptr left_;
  formula_ptr right_;
};

inline bool equal( formula const& a, formula const& b )
{
  if ( &a == &b )
    return true;
  if ( a.get_label() != b.get_label() )
    return false;
  if ( a.left() && !equal( *a.left(), *b.left() ) )
    return false;
  if ( a.right() && !equal( *a.right(), *b.right() ) )
    return false;
  return true;
}

inline bool equal( formula_ptr const& a, formula_ptr const& b ) { return equal( *a, *b ); }

/*! \brief Total order on formulas (label first, then children). */
inline int compare( formula const& a, formula const& b )
{
  if ( &a == &b )
    return 0;
  auto const la = a.get_label().index(), lb = b.get_label().index();
  if ( la != lb )
    return la < lb ? -1 : 1;
  if ( a.left() )
    if ( auto c = compare( *a.left(), *b.left() ); c != 0 )
      return c;
  if ( a.right() )
    if ( auto c = compare( *a.right(), *b.right() ); c != 0 )
      return c;
  return 0;
}

inline std::size_t tree_size( formula const& f )
{
  std::size_t n = 1;
  if ( f.left() )
    n += tree_size( *f.left() );
  if ( f.right() )
    n += tree_size( *f.right() );
  return n;
}

/*
 * Printing and parsing
 *
 * Precedence, tightest first: unary prefix (G F X !), U (right-assoc),
 * & (left), | (left), -> (right-assoc).
 */

namespace detail
{

inline int print_level( op o )
{
  switch ( o )
  {
  case op::atom:
  case op::globally:
  case op::finally:
  case op::next:
  case op::not_:
    return 0;
  case op::until: return 1;
  case op::and_: return 2;
  case op::or_: return 3;
  case op::implies: return 4;
  }
  return 5;
}

inline void print_rec( formula const& f, prop_list const& ap, std::string& out )
{
  auto paren = [&]( formula const& sub, bool need ) {
    if ( need )
      out += '(';
    print_rec( sub, ap, out );
    if ( need )
      out += ')';
  };

  auto const lvl = print_level( f.kind() );
  switch ( f.kind() )
  {
  case op::atom:
    out += f.prop() < ap.size() ? ap[f.prop()].name : "p" + std::to_string( f.prop() );
    return;
  case op::globally:
  case op::finally:
  case op::next:
  case op::not_:
    out += op_symbol( f.kind() );
    {
      auto const& sub = *f.left();
      bool const need = print_level( sub.kind() ) > 0;
      /* "G p" would lex as the identifier "Gp"; use parentheses for prefix operands */
      bool const starts_alpha = sub.kind() == op::atom || sub.kind() == op::globally || sub.kind() == op::finally || sub.kind() == op::next;
      if ( !need && starts_alpha && f.kind() != op::not_ )
        out += ' ';
      paren( sub, need );
    }
    return;
  case op::until:
  case op::implies:
    /* right-associative */
    paren( *f.left(), print_level( f.left()->kind() ) >= lvl );
    out += ' ';
    out += op_symbol( f.kind() );
    out += ' ';
    paren( *f.right(), print_level( f.right()->kind() ) > lvl );
    return;
  case op::and_:
  case op::or_:
    /* left-associative */
    paren( *f.left(), print_level( f.left()->kind() ) > lvl );
    out += ' ';
    out += op_symbol( f.kind() );
    out += ' ';
    paren( *f.right(), print_level( f.right()->kind() ) >= lvl );
    return;
  }
}

class formula_parser
{
public:
  formula_parser( std::string_view text, prop_list const& ap )
      : text_( text ), ap_( ap )
  {
  }

  formula_ptr parse()
  {
    next();
    auto f = parse_implies();
    if ( tok_ != token::end )
      fail( "unexpected '" + tok_text_ + "'" );
    return f;
  }

private:
  enum class token
  {
    end,
    ident,
    lparen,
    rparen,
    bang,
    amp,
    bar,
    arrow,
  };

  [[noreturn]] void fail( std::string const& msg ) const
  {
    throw parse_error( msg, 1, tok_pos_ + 1 );
  }

  void next()
  {
    while ( pos_ < text_.size() && std::isspace( static_cast<unsigned char>( text_[pos_] ) ) )
      ++pos_;
    tok_pos_ = pos_;
    if ( pos_ >= text_.size() )
    {
      tok_ = token::end;
      tok_text_ = "<end>";
      return;
    }
    char const c = text_[pos_];
    if ( std::isalpha( static_cast<unsigned char>( c ) ) || c == '_' )
    {
      auto const start = pos_;
      while ( pos_ < text_.size() && ( std::isalnum( static_cast<unsigned char>( text_[pos_] ) ) || text_[pos_] == '_' ) )
        ++pos_;
      tok_ = token::ident;
      tok_text_ = std::string( text_.substr( start, pos_ - start ) );
      return;
    }
    ++pos_;
    tok_text_ = std::string( 1, c );
    switch ( c )
    {
    case '(': tok_ = token::lparen; return;
    case ')': tok_ = token::rparen; return;
    case '!': tok_ = token::bang; return;
    case '&': tok_ = token::amp; return;
    case '|': tok_ = token::bar; return;
    case '-':
      if ( pos_ < text_.size() && text_[pos_] == '>' )
      {
        ++pos_;
        tok_ = token::arrow;
        tok_text_ = "->";
        return;
      }
      break;
    default:
      break;
    }
    fail( "unexpected character '" + tok_text_ + "'" );
  }

  formula_ptr parse_implies()
  {
    auto lhs = parse_or();
    if ( tok_ == token::arrow )
    {
      next();
      return formula::make_binary( op::implies, lhs, parse_implies() );
    }
    return lhs;
  }

  formula_ptr parse_or()
  {
    auto lhs = parse_and();
    while ( tok_ == token::bar )
    {
      next();
      lhs = formula::make_binary( op::or_, lhs, parse_and() );
    }
    return lhs;
  }

  formula_ptr parse_and()
  {
    auto lhs = parse_until();
    while ( tok_ == token::amp )
    {
      next();
      lhs = formula::make_binary( op::and_, lhs, parse_until() );
    }
    return lhs;
  }

  formula_ptr parse_until()
  {
    auto lhs = parse_unary();
    if ( tok_ == token::ident && tok_text_ == "U" )
    {
      next();
      return formula::make_binary( op::until, lhs, parse_until() );
    }
    return lhs;
  }

  formula_ptr parse_unary()
  {
    if ( tok_ == token::bang )
    {
      next();
      return formula::make_unary( op::not_, parse_unary() );
    }
    if ( tok_ == token::lparen )
    {
      next();
      auto f = parse_implies();
      if ( tok_ != token::rparen )
        fail( "expected ')'" );
      next();
      return f;
    }
    if ( tok_ == token::ident )
    {
      auto const name = tok_text_;
      if ( name == "G" || name == "F" || name == "X" )
      {
        next();
        auto const o = name == "G" ? op::globally : name == "F" ? op::finally : op::next;
        return formula::make_unary( o, parse_unary() );
      }
      if ( name == "U" )
        fail( "unexpected 'U'" );
      auto const idx = ap_.find( name );
      if ( !idx )
        fail( "unknown proposition '" + name + "'" );
      next();
      return formula::make_atom( *idx );
    }
    fail( "unexpected '" + tok_text_ + "'" );
  }

  std::string_view text_;
  prop_list const& ap_;
  std::size_t pos_ = 0;
  std::size_t tok_pos_ = 0;
  token tok_ = token::end;
  std::string tok_text_;
};

} // namespace detail

inline std::string to_string( formula const& f, prop_list const& ap )
{
  std::string out;
  detail::print_rec( f, ap, out );
  return out;
}

inline formula_ptr parse_formula( std::string_view text, prop_list const& ap )
{
  return detail::formula_parser( text, ap ).parse();
}

/*! \brief Sorts the operands of every & and | by the total formula order. */
inline formula_ptr normalize_commutative( formula_ptr const& f )
{
  switch ( arity( f->kind() ) )
  {
  case 0:
    return f;
  case 1:
    return formula::make_unary( f->kind(), normalize_commutative( f->left() ) );
  default:
  {
    auto l = normalize_commutative( f->left() );
    auto r = normalize_commutative( f->right() );
    if ( ( f->kind() == op::and_ || f->kind() == op::or_ ) && compare( *r, *l ) < 0 )
      std::swap( l, r );
    return formula::make_binary( f->kind(), l, r );
  }
  }
}

/*
 * Syntax DAGs
 */

struct dag_node
{
  label lbl;
  std::optional<uint32_t> left;
  std::optional<uint32_t> right;

  bool operator==( dag_node const& ) const = default;
};

/*! \brief Rooted DAG with left/right child maps. */
struct syntax_dag
{
  std::vector<dag_node> nodes;
  uint32_t root = 0;

  bool operator==( syntax_dag const& ) const = default;

  /*! \brief Nodes reachable from root, in increasing index order. */
  std::vector<uint32_t> reachable() const
  {
    std::vector<char> seen( nodes.size(), 0 );
    std::vector<uint32_t> stack{ root };
    while ( !stack.empty() )
    {
      auto const n = stack.back();
      stack.pop_back();
      if ( n >= nodes.size() || seen[n] )
        continue;
      seen[n] = 1;
      if ( nodes[n].left )
        stack.push_back( *nodes[n].left );
      if ( nodes[n].right )
        stack.push_back( *nodes[n].right );
    }
    std::vector<uint32_t> out;
    for ( uint32_t i = 0; i < nodes.size(); ++i )
      if ( seen[i] )
        out.push_back( i );
    return out;
  }

  /*! \brief Children-before-parents order of the nodes reachable from root. */
  std::vector<uint32_t> topological_order() const
  {
    std::vector<char> state( nodes.size(), 0 );
    std::vector<uint32_t> order;
    std::function<void( uint32_t )> visit = [&]( uint32_t n ) {
      if ( state[n] == 2 )
        return;
      if ( state[n] == 1 )
        throw std::logic_error( "syntax_dag: cycle through node " + std::to_string( n ) );
      state[n] = 1;
      if ( nodes[n].left )
        visit( *nodes[n].left );
      if ( nodes[n].right )
        visit( *nodes[n].right );
      state[n] = 2;
      order.push_back( n );
    };
    visit( root );
    return order;
  }

  bool is_acyclic() const
  {
    /* colours: 0 unvisited, 1 on stack, 2 done; checks every node, not only reachable ones */
    std::vector<char> state( nodes.size(), 0 );
    std::function<bool( uint32_t )> visit = [&]( uint32_t n ) -> bool {
      if ( state[n] == 2 )
        return true;
      if ( state[n] == 1 )
        return false;
      state[n] = 1;
      for ( auto c : { nodes[n].left, nodes[n].right } )
        if ( c && !visit( *c ) )
          return false;
      state[n] = 2;
      return true;
    };
    for ( uint32_t i = 0; i < nodes.size(); ++i )
      if ( !visit( i ) )
        return false;
    return true;
  }

  /*! \brief Checks index ranges, arities, acyclicity and the proposition bound. */
  void validate( std::size_t num_props ) const
  {
    if ( nodes.empty() || root >= nodes.size() )
      throw std::logic_error( "syntax_dag: root out of range" );
    for ( uint32_t i = 0; i < nodes.size(); ++i )
    {
      auto const& n = nodes[i];
      auto const a = arity( n.lbl.kind );
      if ( n.lbl.kind == op::atom && n.lbl.prop >= num_props )
        throw std::logic_error( "syntax_dag: node " + std::to_string( i ) + " has unknown proposition" );
      if ( ( a >= 1 ) != n.left.has_value() || ( a == 2 ) != n.right.has_value() )
        throw std::logic_error( "syntax_dag: arity mismatch at node " + std::to_string( i ) );
      for ( auto c : { n.left, n.right } )
        if ( c && *c >= nodes.size() )
          throw std::logic_error( "syntax_dag: child index out of range at node " + std::to_string( i ) );
    }
    if ( !is_acyclic() )
      throw std::logic_error( "syntax_dag: cycle" );
  }
};

inline std::size_t dag_size( syntax_dag const& d ) { return d.reachable().size(); }

enum class sharing
{
  none,  /* one node per tree position */
  atoms, /* one node per proposition, other subformulas kept apart */
  full,  /* structurally identical subformulas become one node */
};

/*! \brief Converts a formula to a DAG whose nodes are in children-first order, root last. */
inline syntax_dag formula_to_dag( formula const& f, sharing mode )
{
  syntax_dag d;
  std::map<std::tuple<uint32_t, int64_t, int64_t>, uint32_t> memo;
  std::function<uint32_t( formula const& )> build = [&]( formula const& g ) -> uint32_t {
    std::optional<uint32_t> l, r;
    if ( g.left() )
      l = build( *g.left() );
    if ( g.right() )
      r = build( *g.right() );
    auto const key = std::make_tuple( g.get_label().index(), l ? int64_t( *l ) : -1, r ? int64_t( *r ) : -1 );
    bool const share = mode == sharing::full || ( mode == sharing::atoms && g.kind() == op::atom );
    if ( share )
      if ( auto it = memo.find( key ); it != memo.end() )
        return it->second;
    auto const idx = static_cast<uint32_t>( d.nodes.size() );
    d.nodes.push_back( { g.get_label(), l, r } );
    if ( share )
      memo.emplace( key, idx );
    return idx;
  };
  d.root = build( f );
  return d;
}

/*! \brief Full sharing when `share`, none otherwise. */
inline syntax_dag formula_to_dag( formula const& f, bool share )
{
  return formula_to_dag( f, share ? sharing::full : sharing::none );
}

inline formula_ptr dag_to_formula( syntax_dag const& d )
{
  std::vector<formula_ptr> built( d.nodes.size() );
  for ( auto n : d.topological_order() )
  {
    auto const& node = d.nodes[n];
    built[n] = formula::make( node.lbl, node.left ? built[*node.left] : nullptr, node.right ? built[*node.right] : nullptr );
  }
  return built[d.root];
}

inline std::string to_string( syntax_dag const& d, prop_list const& ap ) { return to_string( *dag_to_formula( d ), ap ); }

inline std::string label_name( label l, prop_list const& ap )
{
  if ( l.kind == op::atom )
    return l.prop < ap.size() ? ap[l.prop].name : "p" + std::to_string( l.prop );
  return std::string( op_symbol( l.kind ) );
}

/*! \brief One line per node: `index label [left] [right]`, root marked. */
inline std::string dag_listing( syntax_dag const& d, prop_list const& ap )
{
  std::string out;
  for ( auto n : d.reachable() )
  {
    auto const& node = d.nodes[n];
    out += std::to_string( n ) + " " + label_name( node.lbl, ap );
    if ( node.left )
      out += " l=" + std::to_string( *node.left );
    if ( node.right )
      out += " r=" + std::to_string( *node.right );
    if ( n == d.root )
      out += " root";
    out += "\n";
  }
  return out;
}

} // namespace cltl
