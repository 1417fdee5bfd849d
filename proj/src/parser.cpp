#include "objcheck/parser.hpp"

#include "lexer.hpp"

#include <fmt/format.h>

#include <map>
#include <set>

namespace objcheck {

using detail::Tok;
using detail::Token;

namespace {

struct ParseError {
  Diagnostic diagnostic;
};

// A main-body statement: either a single action awaiting its continuation,
// or a process that ends the object's main.
struct Stmt {
  ProcPtr proc;
  bool terminal = false;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  std::vector<SystemDeclPtr> file() {
    std::vector<SystemDeclPtr> systems;
    if (peek().kind == Tok::End) fail(peek(), "expected `system`");
    while (peek().kind != Tok::End) systems.push_back(system());
    return systems;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  const Token& take() {
    const Token& tok = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return tok;
  }

  const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }

  [[noreturn]] void fail(const Token& at, std::string_view what) {
    throw ParseError{make_diagnostic(
        DiagKind::UnexpectedToken, at.span,
        fmt::format("{}, found {}", what,
                    at.kind == Tok::LIdent || at.kind == Tok::UIdent
                        ? fmt::format("`{}`", at.text)
                        : std::string(detail::describe(at.kind))))};
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) fail(peek(), fmt::format("expected {}", what));
    return take();
  }

  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    take();
    return true;
  }

  SystemDeclPtr system() {
    auto sys = std::make_shared<SystemDecl>();
    const Token& kw = expect(Tok::KwSystem, "`system`");
    const Token& name = expect(Tok::LIdent, "a system name");
    sys->name = name.text;
    sys->name_span = name.span;
    if (accept(Tok::Colon)) {
      const Token& parent = expect(Tok::LIdent, "the name of the abstract system");
      sys->parent = parent.text;
      sys->parent_span = parent.span;
    }
    while (accept(Tok::KwUsing)) {
      const Token& used = expect(Tok::LIdent, "a system name after `using`");
      sys->usings.push_back(used.text);
      sys->using_spans.push_back(used.span);
    }
    while (peek().kind == Tok::KwObj) sys->objects.push_back(object());
    if (peek().kind != Tok::KwSystem && peek().kind != Tok::End) {
      fail(peek(), "expected `obj`, `system` or end of file");
    }
    sys->span = join(kw.span, prev().span);
    return sys;
  }

  std::shared_ptr<const ObjectDecl> object() {
    auto obj = std::make_shared<ObjectDecl>();
    const Token& kw = expect(Tok::KwObj, "`obj`");
    const Token& name = expect(Tok::LIdent, "an object name");
    obj->name = name.text;
    obj->name_span = name.span;

    std::vector<Stmt> stmts;
    while (peek().kind != Tok::KwObj && peek().kind != Tok::KwSystem && peek().kind != Tok::End) {
      if (peek().kind == Tok::KwBehaviour) {
        obj->behaviours.push_back(behaviour());
      } else {
        if (!stmts.empty() && stmts.back().terminal) {
          fail(peek(), "the object's process has already terminated; expected `behaviour`");
        }
        stmts.push_back(statement());
      }
    }
    if (stmts.empty() || !stmts.back().terminal) {
      Span at = stmts.empty() ? name.span : stmts.back().proc->span;
      throw ParseError{make_diagnostic(
          DiagKind::UnterminatedProcess, at,
          fmt::format("the main process of `{}` does not end in `.`, an invocation, or a choice",
                      obj->name))};
    }
    // Fold the action statements around the terminal one.
    ProcPtr main = std::move(stmts.back().proc);
    for (std::size_t i = stmts.size() - 1; i-- > 0;) {
      ProcPtr action = std::move(stmts[i].proc);
      set_continuation(*action, std::move(main));
      main = std::move(action);
    }
    obj->main = std::move(main);
    obj->span = join(kw.span, prev().span);
    return obj;
  }

  static void set_continuation(Proc& action, ProcPtr cont) {
    if (auto* s = std::get_if<SendChoice>(&action.node)) {
      s->branches.front().body = std::move(cont);
    } else if (auto* r = std::get_if<RecvChoice>(&action.node)) {
      r->branches.front().body = std::move(cont);
    }
  }

  Behaviour behaviour() {
    Behaviour b;
    expect(Tok::KwBehaviour, "`behaviour`");
    const Token& name = expect(Tok::UIdent, "a behaviour name (upper-case initial)");
    b.name = name.text;
    b.name_span = name.span;
    if (accept(Tok::LParen)) b.params = binder_list();
    b.body = proc();
    return b;
  }

  std::vector<Binder> binder_list() {
    std::vector<Binder> out;
    do {
      const Token& t = expect(Tok::LIdent, "a variable name");
      out.push_back(Binder{t.text, t.span});
    } while (accept(Tok::Comma));
    expect(Tok::RParen, "`,` or `)`");
    return out;
  }

  std::vector<Expr> expr_list() {
    std::vector<Expr> out;
    do {
      out.push_back(expr());
    } while (accept(Tok::Comma));
    expect(Tok::RParen, "`,` or `)`");
    return out;
  }

  Expr expr() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::LIdent: take(); return Expr{Expr::Kind::Var, t.text, 0, t.span};
      case Tok::Int: take(); return Expr{Expr::Kind::Int, t.text, t.number, t.span};
      case Tok::Str: take(); return Expr{Expr::Kind::Str, t.text, 0, t.span};
      default: fail(t, "expected a variable, integer or string");
    }
  }

  bool at_action() const {
    return peek().kind == Tok::LIdent &&
           (peek(1).kind == Tok::Bang || peek(1).kind == Tok::Query);
  }

  // proc := action proc | choice | invoke | "."
  ProcPtr proc() {
    if (at_action()) {
      Stmt s = statement();
      if (!s.terminal) set_continuation(*s.proc, proc());
      return std::move(s.proc);
    }
    Stmt s = statement();
    return std::move(s.proc);
  }

  Stmt statement() {
    const Token& t = peek();
    if (t.kind == Tok::Dot) {
      take();
      return Stmt{std::make_unique<Proc>(Proc{Stop{}, t.span}), true};
    }
    if (t.kind == Tok::UIdent) {
      take();
      Invoke inv{t.text, t.span, {}};
      if (accept(Tok::LParen)) inv.args = expr_list();
      Span span = join(t.span, prev().span);
      return Stmt{std::make_unique<Proc>(Proc{std::move(inv), span}), true};
    }
    if (!at_action()) fail(t, "expected a send, receive, invocation or `.`");

    const Token& peer = take();
    bool sending = take().kind == Tok::Bang;
    if (peek().kind == Tok::LBrace) {
      take();
      auto p = sending ? send_block(peer) : recv_block(peer);
      return Stmt{std::move(p), true};
    }
    const Token& label = expect(Tok::LIdent, "a message label");
    if (sending) {
      SendBranch br{label.text, label.span, {}, nullptr};
      if (accept(Tok::LParen)) br.args = expr_list();
      SendChoice choice{peer.text, peer.span, {}};
      choice.branches.push_back(std::move(br));
      return Stmt{std::make_unique<Proc>(Proc{std::move(choice), join(peer.span, prev().span)}),
                  false};
    }
    RecvBranch br{label.text, label.span, {}, nullptr};
    if (accept(Tok::LParen)) br.binders = binder_list();
    RecvChoice choice{peer.text, peer.span, {}};
    choice.branches.push_back(std::move(br));
    return Stmt{std::make_unique<Proc>(Proc{std::move(choice), join(peer.span, prev().span)}),
                false};
  }

  const Token& branch_label() {
    if (at_action()) fail(peek(), "expected a branch label, not an action");
    return expect(Tok::LIdent, "a branch label or `}`");
  }

  ProcPtr send_block(const Token& peer) {
    SendChoice choice{peer.text, peer.span, {}};
    do {
      const Token& label = branch_label();
      SendBranch br{label.text, label.span, {}, nullptr};
      if (accept(Tok::LParen)) br.args = expr_list();
      br.body = proc();
      choice.branches.push_back(std::move(br));
    } while (!accept(Tok::RBrace));
    return std::make_unique<Proc>(Proc{std::move(choice), join(peer.span, prev().span)});
  }

  ProcPtr recv_block(const Token& peer) {
    RecvChoice choice{peer.text, peer.span, {}};
    do {
      const Token& label = branch_label();
      RecvBranch br{label.text, label.span, {}, nullptr};
      if (accept(Tok::LParen)) br.binders = binder_list();
      br.body = proc();
      choice.branches.push_back(std::move(br));
    } while (!accept(Tok::RBrace));
    return std::make_unique<Proc>(Proc{std::move(choice), join(peer.span, prev().span)});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Checks the well-formedness rules that the grammar alone does not enforce.
class Validator {
 public:
  explicit Validator(std::vector<Diagnostic>& out) : out_(out) {}

  void system(const SystemDecl& sys) {
    if (sys.parent && *sys.parent == sys.name) {
      report(DiagKind::InvalidParent, sys.parent_span,
             fmt::format("system `{}` cannot refine itself", sys.name));
    }
    std::map<std::string, const ObjectDecl*> seen;
    for (const auto& obj : sys.objects) {
      auto [it, fresh] = seen.emplace(obj->name, obj.get());
      if (!fresh) {
        auto& d = report(DiagKind::DuplicateObject, obj->name_span,
                         fmt::format("object `{}` is defined twice in system `{}`", obj->name,
                                     sys.name));
        d.notes.push_back(Note{it->second->name_span, "first defined here"});
      }
      object(*obj);
    }
  }

 private:
  Diagnostic& report(DiagKind kind, Span span, std::string message) {
    out_.push_back(make_diagnostic(kind, span, std::move(message)));
    return out_.back();
  }

  void object(const ObjectDecl& obj) {
    obj_ = &obj;
    std::map<std::string, const Behaviour*> seen;
    for (const auto& b : obj.behaviours) {
      auto [it, fresh] = seen.emplace(b.name, &b);
      if (!fresh) {
        auto& d = report(DiagKind::DuplicateBehaviour, b.name_span,
                         fmt::format("behaviour `{}` is declared twice in `{}`", b.name, obj.name));
        d.notes.push_back(Note{it->second->name_span, "first declared here"});
      }
    }
    for (const auto& b : obj.behaviours) {
      std::set<std::string> scope;
      binders(b.params, scope);
      proc(*b.body, scope);
    }
    proc(*obj.main, {});
  }

  void binders(const std::vector<Binder>& list, std::set<std::string>& scope) {
    std::set<std::string> local;
    for (const auto& b : list) {
      if (!local.insert(b.name).second) {
        report(DiagKind::DuplicateBinder, b.span,
               fmt::format("variable `{}` is bound twice", b.name));
      }
      scope.insert(b.name);
    }
  }

  void exprs(const std::vector<Expr>& args, const std::set<std::string>& scope) {
    for (const auto& e : args) {
      if (e.kind == Expr::Kind::Var && !scope.contains(e.text)) {
        report(DiagKind::UnboundVariable, e.span, fmt::format("unbound variable `{}`", e.text));
      }
    }
  }

  void peer(const std::string& name, Span span) {
    if (name == obj_->name) {
      report(DiagKind::SelfMessage, span,
             fmt::format("object `{}` cannot message itself", name));
    }
  }

  template <class Branches>
  void labels(const Branches& branches) {
    std::map<std::string, Span> seen;
    for (const auto& br : branches) {
      auto [it, fresh] = seen.emplace(br.label, br.label_span);
      if (!fresh) {
        auto& d = report(DiagKind::DuplicateLabel, br.label_span,
                         fmt::format("label `{}` appears twice in one choice", br.label));
        d.notes.push_back(Note{it->second, "first used here"});
      }
    }
  }

  void proc(const Proc& p, const std::set<std::string>& scope) {
    if (const auto* s = p.send()) {
      peer(s->peer, s->peer_span);
      labels(s->branches);
      for (const auto& br : s->branches) {
        exprs(br.args, scope);
        proc(*br.body, scope);
      }
    } else if (const auto* r = p.recv()) {
      peer(r->peer, r->peer_span);
      labels(r->branches);
      for (const auto& br : r->branches) {
        std::set<std::string> inner = scope;
        binders(br.binders, inner);
        proc(*br.body, inner);
      }
    } else if (const auto* inv = p.invoke()) {
      exprs(inv->args, scope);
      const Behaviour* target = obj_->find_behaviour(inv->name);
      if (!target) {
        report(DiagKind::UndeclaredBehaviour, inv->name_span,
               fmt::format("`{}` has no behaviour named `{}`", obj_->name, inv->name));
      } else if (target->params.size() != inv->args.size()) {
        report(DiagKind::BehaviourArity, p.span,
               fmt::format("behaviour `{}` takes {} argument(s) but {} were given", inv->name,
                           target->params.size(), inv->args.size()));
      }
    }
  }

  std::vector<Diagnostic>& out_;
  const ObjectDecl* obj_ = nullptr;
};

}  // namespace

ParseResult parse(std::string_view text, FileId file) {
  ParseResult result;
  auto lexed = detail::lex(text, file);
  if (!lexed.diagnostics.empty()) {
    result.diagnostics = std::move(lexed.diagnostics);
    return result;
  }
  std::vector<SystemDeclPtr> systems;
  try {
    systems = Parser(std::move(lexed.tokens)).file();
  } catch (ParseError& e) {
    result.diagnostics.push_back(std::move(e.diagnostic));
    return result;
  }
  Validator validator(result.diagnostics);
  for (const auto& sys : systems) validator.system(*sys);
  if (result.diagnostics.empty()) result.systems = std::move(systems);
  return result;
}

}  // namespace objcheck
