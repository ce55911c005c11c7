/*!
  \file parser.hpp
  \brief Concrete syntax for constraint programs: lexer, parser, name resolution, arity checking

  Statements end with `;`:

    func name(x) = expr;
    node a, b : expr;
    rel name = expr;
    constraint formula;
    minimize[k] expr;  maximize[k] expr;  softempty[k] expr;  soft[k] formula;

  Comments run from `//`, `--` or a `#` followed by whitespace to the end of the
  line. `#` directly followed by an operand is cardinality.
*/

#pragma once

#include "ast.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <string_view>

namespace cltl::constraint
{

namespace detail
{

enum class tok
{
  end,
  ident,
  number,
  lparen,
  rparen,
  lbracket,
  rbracket,
  lbrace,
  rbrace,
  comma,
  semicolon,
  colon,
  dot,
  plus,
  minus,
  backslash,
  amp,
  ampamp,
  bar,
  barbar,
  tilde,
  caret,
  star,
  hash,
  eq,
  ne,
  lt,
  le,
  gt,
  ge,
  arrow,   /* -> */
  darrow,  /* => */
  iff,     /* <=> */
  product, /* >< */
  bang,
};

struct token
{
  tok kind;
  std::string text;
  source_pos pos;
};

inline std::vector<token> lex( std::string_view src )
{
  std::vector<token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&]( std::size_t k ) {
    for ( ; k > 0; --k, ++i )
    {
      if ( src[i] == '\n' )
      {
        ++line;
        col = 1;
      }
      else
        ++col;
    }
  };
  auto peek = [&]( std::size_t k ) { return i + k < src.size() ? src[i + k] : '\0'; };

  while ( i < src.size() )
  {
    char const c = src[i];
    if ( std::isspace( static_cast<unsigned char>( c ) ) )
    {
      advance( 1 );
      continue;
    }
    bool const comment = ( c == '/' && peek( 1 ) == '/' ) || ( c == '-' && peek( 1 ) == '-' ) ||
                         ( c == '#' && ( peek( 1 ) == '\0' || peek( 1 ) == '#' || std::isspace( static_cast<unsigned char>( peek( 1 ) ) ) ) );
    if ( comment )
    {
      while ( i < src.size() && src[i] != '\n' )
        advance( 1 );
      continue;
    }
    source_pos const pos{ line, col };
    if ( std::isalpha( static_cast<unsigned char>( c ) ) || c == '_' )
    {
      auto const start = i;
      while ( i < src.size() && ( std::isalnum( static_cast<unsigned char>( src[i] ) ) || src[i] == '_' ) )
        advance( 1 );
      out.push_back( { tok::ident, std::string( src.substr( start, i - start ) ), pos } );
      continue;
    }
    if ( std::isdigit( static_cast<unsigned char>( c ) ) )
    {
      auto const start = i;
      while ( i < src.size() && std::isdigit( static_cast<unsigned char>( src[i] ) ) )
        advance( 1 );
      out.push_back( { tok::number, std::string( src.substr( start, i - start ) ), pos } );
      continue;
    }
    static constexpr std::pair<std::string_view, tok> symbols[] = {
        { "<=>", tok::iff }, { "<=", tok::le }, { ">=", tok::ge }, { "!=", tok::ne }, { "->", tok::arrow },
        { "=>", tok::darrow }, { "><", tok::product }, { "&&", tok::ampamp }, { "||", tok::barbar },
        { "(", tok::lparen }, { ")", tok::rparen }, { "[", tok::lbracket }, { "]", tok::rbracket },
        { "{", tok::lbrace }, { "}", tok::rbrace }, { ",", tok::comma }, { ";", tok::semicolon },
        { ":", tok::colon }, { ".", tok::dot }, { "+", tok::plus }, { "-", tok::minus },
        { "\\", tok::backslash }, { "&", tok::amp }, { "|", tok::bar }, { "~", tok::tilde },
        { "^", tok::caret }, { "*", tok::star }, { "#", tok::hash }, { "=", tok::eq }, { "<", tok::lt },
        { ">", tok::gt }, { "!", tok::bang } };
    bool matched = false;
    for ( auto const& [sym, kind] : symbols )
      if ( src.substr( i, sym.size() ) == sym )
      {
        out.push_back( { kind, std::string( sym ), pos } );
        advance( sym.size() );
        matched = true;
        break;
      }
    if ( !matched )
      throw parse_error( "unexpected character '" + std::string( 1, c ) + "'", line, col );
  }
  out.push_back( { tok::end, "<end of input>", { line, col } } );
  return out;
}

inline bool is_keyword( std::string_view s )
{
  static constexpr std::string_view kws[] = { "all", "some", "no", "one", "lone", "in", "not", "and", "or",
                                              "implies", "iff", "true", "false", "none", "func", "node", "rel",
                                              "constraint", "minimize", "maximize", "softempty", "soft" };
  return std::find( std::begin( kws ), std::end( kws ), s ) != std::end( kws );
}

inline std::optional<builtin> builtin_by_name( std::string_view s )
{
  for ( auto b : { builtin::root, builtin::nodes, builtin::left, builtin::right, builtin::ap, builtin::temporal } )
    if ( builtin_name( b ) == s )
      return b;
  return std::nullopt;
}

class parser
{
public:
  parser( std::string_view text, prop_list const& ap ) : toks_( lex( text ) ), ap_( ap ) {}

  program parse_program()
  {
    program p;
    while ( cur().kind != tok::end )
      statement( p );
    return p;
  }

  form_ptr parse_single_formula()
  {
    auto f = formula();
    expect( tok::end, "end of input" );
    return f;
  }

private:
  using mexpr = std::shared_ptr<expr>;
  using mform = std::shared_ptr<form>;

  token const& cur() const { return toks_[pos_]; }
  token const& ahead( std::size_t k ) const { return toks_[std::min( pos_ + k, toks_.size() - 1 )]; }
  bool at( tok k ) const { return cur().kind == k; }
  bool at_word( std::string_view w ) const { return cur().kind == tok::ident && cur().text == w; }

  [[noreturn]] void fail( std::string const& msg, source_pos p ) const
  {
    throw parse_error( msg, p.line, p.column );
  }
  [[noreturn]] void fail( std::string const& msg ) const { fail( msg, cur().pos ); }

  token const& take()
  {
    auto const& t = toks_[pos_];
    if ( pos_ + 1 < toks_.size() )
      ++pos_;
    return t;
  }

  token const& expect( tok k, std::string_view what )
  {
    if ( !at( k ) )
      fail( "expected " + std::string( what ) + " but found '" + cur().text + "'" );
    return take();
  }

  std::string identifier( std::string_view what )
  {
    if ( !at( tok::ident ) || is_keyword( cur().text ) )
      fail( "expected " + std::string( what ) + " but found '" + cur().text + "'" );
    return take().text;
  }

  uint32_t priority()
  {
    if ( !at( tok::lbracket ) )
      return 1;
    take();
    auto const& t = expect( tok::number, "priority" );
    auto const k = std::stoull( t.text );
    if ( k < 1 || k > 1000000 )
      fail( "priority must be a positive integer", t.pos );
    expect( tok::rbracket, "']'" );
    return static_cast<uint32_t>( k );
  }

  void statement( program& p )
  {
    auto const pos = cur().pos;
    if ( at_word( "func" ) )
    {
      take();
      func_def f;
      f.pos = pos;
      f.name = identifier( "function name" );
      expect( tok::lparen, "'('" );
      f.param = identifier( "parameter name" );
      expect( tok::rparen, "')'" );
      expect( tok::eq, "'='" );
      f.body = expression();
      p.funcs.push_back( std::move( f ) );
    }
    else if ( at_word( "node" ) )
    {
      take();
      std::vector<std::string> names{ identifier( "node name" ) };
      while ( at( tok::comma ) )
      {
        take();
        names.push_back( identifier( "node name" ) );
      }
      expect( tok::colon, "':'" );
      auto const dom = expression();
      for ( auto& n : names )
        p.nodes.push_back( { std::move( n ), dom, pos } );
    }
    else if ( at_word( "rel" ) )
    {
      take();
      rel_def r;
      r.pos = pos;
      r.name = identifier( "relation name" );
      expect( tok::eq, "'='" );
      r.value = expression();
      p.rels.push_back( std::move( r ) );
    }
    else if ( at_word( "constraint" ) )
    {
      take();
      p.constraints.push_back( formula() );
    }
    else if ( at_word( "minimize" ) || at_word( "maximize" ) || at_word( "softempty" ) || at_word( "soft" ) )
    {
      auto const word = take().text;
      objective o;
      o.priority = priority();
      if ( word == "soft" )
      {
        o.kind = objective_kind::soft;
        o.fact = formula();
      }
      else
      {
        o.kind = word == "minimize" ? objective_kind::minimize : word == "maximize" ? objective_kind::maximize : objective_kind::softempty;
        o.target = expression();
      }
      p.objectives.push_back( std::move( o ) );
    }
    else
      fail( "expected a statement (func, node, rel, constraint, minimize, maximize, softempty, soft) but found '" +
            cur().text + "'" );
    expect( tok::semicolon, "';'" );
  }

  /* ---- formulas ---- */

  mform make_form( form_kind k, source_pos p )
  {
    auto f = std::make_shared<form>();
    f->kind = k;
    f->pos = p;
    return f;
  }

  form_ptr formula() { return iff_form(); }

  form_ptr iff_form()
  {
    auto lhs = implies_form();
    while ( at( tok::iff ) || at_word( "iff" ) )
    {
      auto f = make_form( form_kind::iff, take().pos );
      f->a = lhs;
      f->b = implies_form();
      lhs = f;
    }
    return lhs;
  }

  form_ptr implies_form()
  {
    auto lhs = or_form();
    if ( at( tok::darrow ) || at_word( "implies" ) )
    {
      auto f = make_form( form_kind::implies, take().pos );
      f->a = lhs;
      f->b = implies_form();
      return f;
    }
    return lhs;
  }

  form_ptr or_form()
  {
    auto lhs = and_form();
    while ( at( tok::barbar ) || at_word( "or" ) )
    {
      auto f = make_form( form_kind::or_, take().pos );
      f->a = lhs;
      f->b = and_form();
      lhs = f;
    }
    return lhs;
  }

  form_ptr and_form()
  {
    auto lhs = unary_form();
    while ( at( tok::ampamp ) || at_word( "and" ) )
    {
      auto f = make_form( form_kind::and_, take().pos );
      f->a = lhs;
      f->b = unary_form();
      lhs = f;
    }
    return lhs;
  }

  bool quantifier_ahead() const
  {
    if ( !at_word( "all" ) && !at_word( "some" ) )
      return false;
    auto const& a = ahead( 1 );
    if ( a.kind == tok::ident && !is_keyword( a.text ) )
    {
      auto const& b = ahead( 2 );
      return ( b.kind == tok::ident && b.text == "in" ) || b.kind == tok::comma;
    }
    return a.kind == tok::lparen && ahead( 2 ).kind == tok::ident && ahead( 3 ).kind == tok::comma &&
           ahead( 4 ).kind == tok::ident && ahead( 5 ).kind == tok::rparen;
  }

  std::vector<std::string> binder()
  {
    if ( at( tok::lparen ) )
    {
      take();
      auto a = identifier( "variable" );
      expect( tok::comma, "','" );
      auto b = identifier( "variable" );
      expect( tok::rparen, "')'" );
      if ( a == b )
        fail( "tuple binder repeats '" + a + "'" );
      return { a, b };
    }
    return { identifier( "variable" ) };
  }

  form_ptr quantifier()
  {
    auto const& q = take();
    auto const kind = q.text == "all" ? form_kind::forall : form_kind::exists;
    /* `all x, y in E : f` is shorthand for nested quantifiers over the same domain */
    std::vector<std::vector<std::string>> binders{ binder() };
    while ( at( tok::comma ) )
    {
      take();
      binders.push_back( binder() );
    }
    if ( !at_word( "in" ) )
      fail( "expected 'in' after quantified variable" );
    take();
    auto const dom = expression();
    expect( tok::colon, "':'" );
    form_ptr body = formula();
    for ( auto it = binders.rbegin(); it != binders.rend(); ++it )
    {
      auto f = make_form( kind, q.pos );
      f->vars = *it;
      f->domain = dom;
      f->a = body;
      body = f;
    }
    return body;
  }

  form_ptr unary_form()
  {
    auto const p = cur().pos;
    if ( at( tok::bang ) || at_word( "not" ) )
    {
      take();
      auto f = make_form( form_kind::not_, p );
      f->a = unary_form();
      return f;
    }
    if ( quantifier_ahead() )
      return quantifier();
    if ( at_word( "true" ) || at_word( "false" ) )
    {
      auto f = make_form( form_kind::truth, p );
      f->value = take().text == "true";
      return f;
    }
    if ( at( tok::lparen ) )
    {
      /* either a parenthesized formula or the start of an expression */
      auto const save = pos_;
      std::optional<parse_error> first;
      try
      {
        take();
        auto f = formula();
        expect( tok::rparen, "')'" );
        if ( !continues_expression() )
          return f;
      }
      catch ( parse_error const& e )
      {
        first = e;
      }
      pos_ = save;
      try
      {
        return elementary();
      }
      catch ( parse_error const& e )
      {
        /* report whichever reading got further */
        if ( first && std::pair( first->line(), first->column() ) > std::pair( e.line(), e.column() ) )
          throw *first;
        throw;
      }
    }
    return elementary();
  }

  bool continues_expression() const
  {
    switch ( cur().kind )
    {
    case tok::dot:
    case tok::plus:
    case tok::minus:
    case tok::backslash:
    case tok::amp:
    case tok::product:
    case tok::arrow:
    case tok::eq:
    case tok::ne:
      return true;
    case tok::ident: return cur().text == "in" || ( cur().text == "not" && ahead( 1 ).text == "in" );
    default: return false;
    }
  }

  form_ptr elementary()
  {
    auto const p = cur().pos;
    if ( at_word( "no" ) || at_word( "one" ) || at_word( "lone" ) || at_word( "some" ) )
    {
      auto const w = take().text;
      auto f = make_form( form_kind::card, p );
      f->lhs = expression();
      f->sugar = w == "no" ? card_sugar::no : w == "one" ? card_sugar::one : w == "lone" ? card_sugar::lone : card_sugar::some;
      f->cmp = w == "no" ? cmp_op::eq : w == "one" ? cmp_op::eq : w == "lone" ? cmp_op::le : cmp_op::ge;
      f->number = w == "no" ? 0 : 1;
      return f;
    }
    if ( at( tok::hash ) )
    {
      take();
      auto f = make_form( form_kind::card, p );
      f->lhs = prefix_expr();
      switch ( cur().kind )
      {
      case tok::eq: f->cmp = cmp_op::eq; break;
      case tok::ne: f->cmp = cmp_op::ne; break;
      case tok::lt: f->cmp = cmp_op::lt; break;
      case tok::le: f->cmp = cmp_op::le; break;
      case tok::gt: f->cmp = cmp_op::gt; break;
      case tok::ge: f->cmp = cmp_op::ge; break;
      default: fail( "expected a comparison after cardinality" );
      }
      take();
      auto const& n = expect( tok::number, "a number" );
      if ( n.text.size() > 15 )
        fail( "number too large", n.pos );
      f->number = std::stoll( n.text );
      return f;
    }
    auto lhs = expression();
    auto const op = cur().pos;
    if ( at_word( "in" ) )
    {
      take();
      auto f = make_form( form_kind::in, op );
      f->lhs = lhs;
      f->rhs = expression();
      return f;
    }
    if ( at_word( "not" ) && ahead( 1 ).text == "in" )
    {
      take();
      take();
      auto in = make_form( form_kind::in, op );
      in->lhs = lhs;
      in->rhs = expression();
      auto f = make_form( form_kind::not_, op );
      f->a = in;
      return f;
    }
    if ( at( tok::eq ) || at( tok::ne ) )
    {
      auto f = make_form( take().kind == tok::eq ? form_kind::equal : form_kind::not_equal, op );
      f->lhs = lhs;
      f->rhs = expression();
      return f;
    }
    fail( "expected 'in', '=' or '!=' after expression but found '" + cur().text + "'" );
  }

  /* ---- expressions ---- */

  mexpr make_expr( expr_kind k, source_pos p )
  {
    auto e = std::make_shared<expr>();
    e->kind = k;
    e->pos = p;
    return e;
  }

  mexpr binary( expr_kind k, source_pos p, expr_ptr a, expr_ptr b )
  {
    auto e = make_expr( k, p );
    e->args = { std::move( a ), std::move( b ) };
    return e;
  }

  expr_ptr expression()
  {
    auto lhs = intersect_expr();
    while ( at( tok::plus ) || at( tok::minus ) || at( tok::backslash ) )
    {
      auto const& t = take();
      lhs = binary( t.kind == tok::plus ? expr_kind::union_ : expr_kind::diff, t.pos, lhs, intersect_expr() );
    }
    return lhs;
  }

  expr_ptr intersect_expr()
  {
    auto lhs = product_expr();
    while ( at( tok::amp ) )
    {
      auto const& t = take();
      lhs = binary( expr_kind::intersect, t.pos, lhs, product_expr() );
    }
    return lhs;
  }

  expr_ptr product_expr()
  {
    auto lhs = join_expr();
    while ( at( tok::product ) || at( tok::arrow ) )
    {
      auto const& t = take();
      lhs = binary( expr_kind::product, t.pos, lhs, join_expr() );
    }
    return lhs;
  }

  expr_ptr join_expr()
  {
    auto lhs = prefix_expr();
    while ( at( tok::dot ) )
    {
      auto const& t = take();
      lhs = binary( expr_kind::join, t.pos, lhs, prefix_expr() );
    }
    return lhs;
  }

  expr_ptr prefix_expr()
  {
    if ( at( tok::tilde ) || at( tok::caret ) || at( tok::star ) )
    {
      auto const& t = take();
      auto e = make_expr( t.kind == tok::tilde ? expr_kind::inverse : t.kind == tok::caret ? expr_kind::closure : expr_kind::refl_closure, t.pos );
      e->args = { prefix_expr() };
      return e;
    }
    return primary();
  }

  expr_ptr label_set()
  {
    auto e = make_expr( expr_kind::labels, cur().pos );
    take(); /* N */
    expect( tok::lbracket, "'['" );
    auto add_ops = [&]( std::initializer_list<op> ops ) {
      for ( auto o : ops )
        e->labels.push_back( label::of_op( o ) );
    };
    while ( true )
    {
      auto const& t = take();
      std::string text = t.text;
      if ( t.kind == tok::amp || t.text == "and" )
        add_ops( { op::and_ } );
      else if ( t.kind == tok::bar || t.text == "or" )
        add_ops( { op::or_ } );
      else if ( t.kind == tok::arrow || t.text == "imply" || t.text == "implies" )
        add_ops( { op::implies } );
      else if ( t.kind == tok::bang || t.text == "not" )
        add_ops( { op::not_ } );
      else if ( t.text == "G" )
        add_ops( { op::globally } );
      else if ( t.text == "F" )
        add_ops( { op::finally } );
      else if ( t.text == "X" )
        add_ops( { op::next } );
      else if ( t.text == "U" )
        add_ops( { op::until } );
      else if ( t.text == "AP" )
        for ( uint32_t p = 0; p < ap_.size(); ++p )
          e->labels.push_back( label::of_prop( p ) );
      else if ( t.text == "Temporal" )
        add_ops( { op::globally, op::finally, op::until, op::next } );
      else if ( t.kind == tok::ident )
      {
        auto const p = ap_.find( t.text );
        if ( !p )
          fail( "unknown proposition or operator '" + t.text + "' in N[...]", t.pos );
        e->labels.push_back( label::of_prop( *p ) );
      }
      else
        fail( "unexpected '" + t.text + "' in N[...]", t.pos );
      e->label_text.push_back( text );
      if ( at( tok::comma ) )
      {
        take();
        continue;
      }
      expect( tok::rbracket, "']'" );
      break;
    }
    std::sort( e->labels.begin(), e->labels.end() );
    e->labels.erase( std::unique( e->labels.begin(), e->labels.end() ), e->labels.end() );
    return e;
  }

  expr_ptr braces()
  {
    auto const p = take().pos; /* { */
    if ( at( tok::rbrace ) )
    {
      take();
      return make_expr( expr_kind::empty, p );
    }
    bool const single = at( tok::ident ) && ahead( 1 ).kind == tok::bar;
    bool const tuple = at( tok::lparen ) && ahead( 1 ).kind == tok::ident && ahead( 2 ).kind == tok::comma &&
                       ahead( 3 ).kind == tok::ident && ahead( 4 ).kind == tok::rparen && ahead( 5 ).kind == tok::bar;
    if ( single || tuple )
    {
      auto e = make_expr( expr_kind::comprehension, p );
      e->vars = binder();
      expect( tok::bar, "'|'" );
      e->body = formula();
      expect( tok::rbrace, "'}'" );
      return e;
    }
    auto e = make_expr( expr_kind::pairs, p );
    while ( true )
    {
      expect( tok::lparen, "'(' starting a pair" );
      e->args.push_back( expression() );
      expect( tok::comma, "','" );
      e->args.push_back( expression() );
      expect( tok::rparen, "')'" );
      if ( at( tok::comma ) )
      {
        take();
        continue;
      }
      expect( tok::rbrace, "'}'" );
      break;
    }
    return e;
  }

  expr_ptr primary()
  {
    auto const p = cur().pos;
    if ( at( tok::lparen ) )
    {
      take();
      auto e = expression();
      expect( tok::rparen, "')'" );
      return e;
    }
    if ( at( tok::lbrace ) )
      return braces();
    if ( at_word( "none" ) )
    {
      take();
      return make_expr( expr_kind::empty, p );
    }
    if ( at_word( "N" ) && ahead( 1 ).kind == tok::lbracket )
      return label_set();
    auto const name = identifier( "an expression" );
    if ( at( tok::lparen ) )
    {
      take();
      auto e = make_expr( expr_kind::call, p );
      e->name = name;
      e->args = { expression() };
      expect( tok::rparen, "')'" );
      return e;
    }
    auto e = make_expr( expr_kind::name, p );
    e->name = name;
    return e;
  }

  std::vector<token> toks_;
  std::size_t pos_ = 0;
  prop_list const& ap_;
};

/* ---- name resolution and arity checking ---- */

class checker
{
public:
  checker( program& p, prop_list const& ap ) : p_( p ), ap_( ap ) {}

  void run()
  {
    std::set<std::string> declared;
    auto declare = [&]( std::string const& n, source_pos pos, char const* what ) {
      if ( builtin_by_name( n ) || n == "N" )
        fail( std::string( what ) + " '" + n + "' shadows a built-in name", pos );
      if ( ap_.find( n ) )
        fail( std::string( what ) + " '" + n + "' clashes with a proposition", pos );
      if ( !declared.insert( n ).second )
        fail( "duplicate declaration of '" + n + "'", pos );
    };
    for ( auto const& n : p_.nodes )
      declare( n.name, n.pos, "node" );
    for ( auto const& r : p_.rels )
      declare( r.name, r.pos, "relation" );
    for ( auto const& f : p_.funcs )
    {
      if ( is_builtin_func( f.name ) )
        fail( "function '" + f.name + "' redefines a built-in function", f.pos );
      declare( f.name, f.pos, "function" );
    }

    scope_.clear();
    for ( auto& n : p_.nodes )
    {
      n.domain = resolve( n.domain, false );
      if ( arity( *n.domain, {} ) == 2 )
        fail( "node '" + n.name + "' needs a set of nodes as its domain", n.pos );
    }
    for ( auto& r : p_.rels )
      r.value = resolve( r.value, true );
    for ( auto& f : p_.funcs )
    {
      scope_ = { f.param };
      f.body = resolve( f.body, true );
      scope_.clear();
    }
    for ( auto& c : p_.constraints )
      c = resolve( c );
    for ( auto& o : p_.objectives )
    {
      if ( o.target )
        o.target = resolve( o.target, true );
      if ( o.fact )
        o.fact = resolve( o.fact );
    }

    check_cycles();

    /* arity pass; function bodies are checked at each call with the argument's arity */
    for ( auto const& r : p_.rels )
      arity( *r.value, {} );
    for ( auto const& c : p_.constraints )
      check( *c, {} );
    for ( auto const& o : p_.objectives )
    {
      if ( o.fact )
        check( *o.fact, {} );
      else if ( arity( *o.target, {} ) == 0 && o.kind == objective_kind::maximize )
        fail( "maximize needs a set or relation with a known arity", o.target->pos );
    }
  }

  static bool is_builtin_func( std::string_view n ) { return n == "l" || n == "r" || n == "desc" || n == "subNodes"; }

private:
  using env = std::vector<std::pair<std::string, int>>; /* variable -> arity (0 = empty, any) */

  [[noreturn]] static void fail( std::string const& msg, source_pos p )
  {
    throw parse_error( msg, p.line, p.column );
  }

  expr_ptr resolve( expr_ptr const& e, bool consts_allowed )
  {
    auto m = std::make_shared<expr>( *e );
    for ( auto& a : m->args )
      a = resolve( a, consts_allowed );
    if ( m->kind == expr_kind::comprehension )
    {
      auto const saved = scope_.size();
      for ( auto const& v : m->vars )
        scope_.push_back( v );
      m->body = resolve( m->body, consts_allowed );
      scope_.resize( saved );
    }
    if ( m->kind == expr_kind::call )
    {
      if ( !is_builtin_func( m->name ) && !p_.find_func( m->name ) )
        fail( "unknown function '" + m->name + "'", m->pos );
    }
    if ( m->kind == expr_kind::name )
    {
      auto const& n = m->name;
      if ( std::find( scope_.rbegin(), scope_.rend(), n ) != scope_.rend() )
        m->resolved = name_kind::variable;
      else if ( p_.find_node( n ) )
      {
        if ( !consts_allowed )
          fail( "node '" + n + "' cannot be used in a node domain", m->pos );
        m->resolved = name_kind::node_const;
      }
      else if ( p_.find_rel( n ) )
      {
        if ( !consts_allowed )
          fail( "relation '" + n + "' cannot be used in a node domain", m->pos );
        m->resolved = name_kind::rel_def;
      }
      else if ( auto b = builtin_by_name( n ) )
      {
        m->resolved = name_kind::builtin;
        m->which = *b;
      }
      else if ( auto p = ap_.find( n ) )
      {
        m->resolved = name_kind::prop;
        m->prop = *p;
      }
      else if ( p_.find_func( n ) || is_builtin_func( n ) )
        fail( "function '" + n + "' used without an argument", m->pos );
      else
        fail( "unknown identifier '" + n + "'", m->pos );
    }
    return m;
  }

  form_ptr resolve( form_ptr const& f, bool consts_allowed = true )
  {
    auto m = std::make_shared<form>( *f );
    if ( m->lhs )
      m->lhs = resolve( m->lhs, consts_allowed );
    if ( m->rhs )
      m->rhs = resolve( m->rhs, consts_allowed );
    if ( m->domain )
      m->domain = resolve( m->domain, consts_allowed );
    auto const saved = scope_.size();
    for ( auto const& v : m->vars )
      scope_.push_back( v );
    if ( m->a )
      m->a = resolve( m->a, consts_allowed );
    if ( m->b )
      m->b = resolve( m->b, consts_allowed );
    scope_.resize( saved );
    return m;
  }

  void check_cycles()
  {
    /* functions and relation definitions must not depend on themselves */
    std::map<std::string, std::set<std::string>> deps;
    std::function<void( expr const&, std::set<std::string>& )> collect_e;
    std::function<void( form const&, std::set<std::string>& )> collect_f = [&]( form const& f, std::set<std::string>& out ) {
      for ( auto const* e : { f.lhs.get(), f.rhs.get(), f.domain.get() } )
        if ( e )
          collect_e( *e, out );
      for ( auto const* g : { f.a.get(), f.b.get() } )
        if ( g )
          collect_f( *g, out );
    };
    collect_e = [&]( expr const& e, std::set<std::string>& out ) {
      if ( e.kind == expr_kind::call && !is_builtin_func( e.name ) )
        out.insert( e.name );
      if ( e.kind == expr_kind::name && e.resolved == name_kind::rel_def )
        out.insert( e.name );
      for ( auto const& a : e.args )
        collect_e( *a, out );
      if ( e.body )
        collect_f( *e.body, out );
    };
    for ( auto const& f : p_.funcs )
      collect_e( *f.body, deps[f.name] );
    for ( auto const& r : p_.rels )
      collect_e( *r.value, deps[r.name] );

    std::map<std::string, int> state; /* 1 = on stack, 2 = done */
    std::function<void( std::string const& )> visit = [&]( std::string const& n ) {
      auto& s = state[n];
      if ( s == 2 )
        return;
      if ( s == 1 )
      {
        source_pos pos;
        if ( auto const* f = p_.find_func( n ) )
          pos = f->pos;
        else if ( auto const* r = p_.find_rel( n ) )
          pos = r->pos;
        fail( "recursive definition of '" + n + "'", pos );
      }
      s = 1;
      for ( auto const& d : deps[n] )
        visit( d );
      state[n] = 2;
    };
    for ( auto const& [n, _] : deps )
      visit( n );
  }

  static int lookup( env const& en, std::string const& n )
  {
    for ( auto it = en.rbegin(); it != en.rend(); ++it )
      if ( it->first == n )
        return it->second;
    return 1;
  }

  /* 0 stands for the empty set, which fits either arity */
  int arity( expr const& e, env const& en )
  {
    auto same = [&]( int a, int b ) {
      if ( a && b && a != b )
        fail( "operands have different arities (" + std::to_string( a ) + " and " + std::to_string( b ) + ")", e.pos );
      return a ? a : b;
    };
    switch ( e.kind )
    {
    case expr_kind::name:
      switch ( e.resolved )
      {
      case name_kind::variable: return lookup( en, e.name );
      case name_kind::rel_def: return arity( *p_.find_rel( e.name )->value, {} );
      case name_kind::builtin: return e.which == builtin::left || e.which == builtin::right ? 2 : 1;
      default: return 1;
      }
    case expr_kind::labels: return 1;
    case expr_kind::empty: return 0;
    case expr_kind::pairs:
      for ( auto const& a : e.args )
        if ( arity( *a, en ) == 2 )
          fail( "pair components must be nodes or node sets", a->pos );
      return 2;
    case expr_kind::comprehension:
    {
      auto inner = en;
      for ( auto const& v : e.vars )
        inner.emplace_back( v, 1 );
      check( *e.body, inner );
      return static_cast<int>( e.vars.size() );
    }
    case expr_kind::union_:
    case expr_kind::intersect:
    case expr_kind::diff: return same( arity( *e.args[0], en ), arity( *e.args[1], en ) );
    case expr_kind::product:
    {
      auto const a = arity( *e.args[0], en ), b = arity( *e.args[1], en );
      if ( a == 2 || b == 2 )
        fail( "product is only defined on node sets", e.pos );
      return 2;
    }
    case expr_kind::join:
    {
      auto const a = arity( *e.args[0], en ), b = arity( *e.args[1], en );
      if ( a == 0 || b == 0 )
        return 0;
      if ( a + b - 2 < 1 )
        fail( "join of two node sets", e.pos );
      return a + b - 2;
    }
    case expr_kind::closure:
    case expr_kind::refl_closure:
    case expr_kind::inverse:
      if ( arity( *e.args[0], en ) == 1 )
        fail( "closure and inverse need a relation", e.pos );
      return 2;
    case expr_kind::call:
    {
      auto const a = arity( *e.args[0], en );
      if ( is_builtin_func( e.name ) )
      {
        if ( a == 2 )
          fail( "function '" + e.name + "' expects a node set", e.pos );
        return a == 0 ? 0 : 1;
      }
      auto const* f = p_.find_func( e.name );
      return arity( *f->body, { { f->param, a } } );
    }
    }
    return 1;
  }

  void check( form const& f, env const& en )
  {
    switch ( f.kind )
    {
    case form_kind::truth: return;
    case form_kind::in:
    case form_kind::equal:
    case form_kind::not_equal:
    {
      auto const a = arity( *f.lhs, en ), b = arity( *f.rhs, en );
      if ( a && b && a != b )
        fail( "comparison of a node set with a relation", f.pos );
      return;
    }
    case form_kind::card:
      arity( *f.lhs, en );
      if ( f.number < 0 )
        fail( "negative cardinality bound", f.pos );
      return;
    case form_kind::not_: check( *f.a, en ); return;
    case form_kind::and_:
    case form_kind::or_:
    case form_kind::implies:
    case form_kind::iff:
      check( *f.a, en );
      check( *f.b, en );
      return;
    case form_kind::forall:
    case form_kind::exists:
    {
      auto const d = arity( *f.domain, en );
      if ( d && d != static_cast<int>( f.vars.size() ) )
        fail( f.vars.size() == 1 ? "quantifier over a relation needs a tuple binder (a, b)" : "tuple binder over a node set",
              f.pos );
      auto inner = en;
      for ( auto const& v : f.vars )
        inner.emplace_back( v, 1 );
      check( *f.a, inner );
      return;
    }
    }
  }

  program& p_;
  prop_list const& ap_;
  std::vector<std::string> scope_;
};

} // namespace detail

/*! \brief Parses and checks a constraint program over the given propositions.

  The implicit size objective is not added here; see `add_default_objective`.
*/
inline program parse_constraints( std::string_view text, prop_list const& ap )
{
  auto p = detail::parser( text, ap ).parse_program();
  detail::checker( p, ap ).run();
  return p;
}

/*! \brief Parses a program that may refer to the declarations of `context`.

  Only the declarations, constraints and objectives of `text` are returned.
*/
inline program parse_constraints( std::string_view text, prop_list const& ap, program const& context )
{
  auto part = detail::parser( text, ap ).parse_program();
  program all = context;
  auto const offset = [&]( auto const& v ) { return static_cast<std::ptrdiff_t>( v.size() ); };
  auto const nf = offset( all.funcs ), nn = offset( all.nodes ), nr = offset( all.rels ), nc = offset( all.constraints ),
             no = offset( all.objectives );
  all.funcs.insert( all.funcs.end(), part.funcs.begin(), part.funcs.end() );
  all.nodes.insert( all.nodes.end(), part.nodes.begin(), part.nodes.end() );
  all.rels.insert( all.rels.end(), part.rels.begin(), part.rels.end() );
  all.constraints.insert( all.constraints.end(), part.constraints.begin(), part.constraints.end() );
  all.objectives.insert( all.objectives.end(), part.objectives.begin(), part.objectives.end() );
  detail::checker( all, ap ).run();
  program out;
  out.funcs.assign( all.funcs.begin() + nf, all.funcs.end() );
  out.nodes.assign( all.nodes.begin() + nn, all.nodes.end() );
  out.rels.assign( all.rels.begin() + nr, all.rels.end() );
  out.constraints.assign( all.constraints.begin() + nc, all.constraints.end() );
  out.objectives.assign( all.objectives.begin() + no, all.objectives.end() );
  return out;
}

/*! \brief Concatenates programs; declarations must not collide. */
inline program merge_programs( std::vector<program> const& parts, prop_list const& ap )
{
  program out;
  for ( auto const& p : parts )
  {
    out.funcs.insert( out.funcs.end(), p.funcs.begin(), p.funcs.end() );
    out.nodes.insert( out.nodes.end(), p.nodes.begin(), p.nodes.end() );
    out.rels.insert( out.rels.end(), p.rels.begin(), p.rels.end() );
    out.constraints.insert( out.constraints.end(), p.constraints.begin(), p.constraints.end() );
    out.objectives.insert( out.objectives.end(), p.objectives.begin(), p.objectives.end() );
  }
  /* re-run the checks so clashes between parts are reported */
  detail::checker( out, ap ).run();
  return out;
}

/*! \brief Appends `softempty[1] L + R`, which minimizes the number of child edges. */
inline void add_default_objective( program& p )
{
  auto mk = []( builtin b ) {
    auto e = std::make_shared<expr>();
    e->kind = expr_kind::name;
    e->name = std::string( builtin_name( b ) );
    e->resolved = name_kind::builtin;
    e->which = b;
    return e;
  };
  auto u = std::make_shared<expr>();
  u->kind = expr_kind::union_;
  u->args = { mk( builtin::left ), mk( builtin::right ) };
  objective o;
  o.kind = objective_kind::softempty;
  o.priority = 1;
  o.target = u;
  o.implicit = true;
  p.objectives.push_back( o );
}

} // namespace cltl::constraint
