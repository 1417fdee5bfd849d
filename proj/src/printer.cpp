#include "objcheck/parser.hpp"

#include <sstream>

namespace objcheck {

namespace {

std::string expr_text(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var: return e.text;
    case Expr::Kind::Int: return std::to_string(e.number);
    case Expr::Kind::Str: {
      std::string out = "\"";
      for (char c : e.text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
      }
      return out + "\"";
    }
  }
  return {};
}

std::string args_text(const std::vector<Expr>& args) {
  if (args.empty()) return {};
  std::string out = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += expr_text(args[i]);
  }
  return out + ")";
}

std::string binders_text(const std::vector<Binder>& binders) {
  if (binders.empty()) return {};
  std::string out = "(";
  for (std::size_t i = 0; i < binders.size(); ++i) {
    if (i) out += ", ";
    out += binders[i].name;
  }
  return out + ")";
}

class Printer {
 public:
  std::string take() { return out_.str(); }

  void proc(const Proc& p, int depth) {
    if (const auto* s = p.send()) {
      choice(s->peer, "!", s->branches, depth,
             [](const SendBranch& b) { return b.label + args_text(b.args); });
    } else if (const auto* r = p.recv()) {
      choice(r->peer, "?", r->branches, depth,
             [](const RecvBranch& b) { return b.label + binders_text(b.binders); });
    } else if (const auto* inv = p.invoke()) {
      line(depth, inv->name + args_text(inv->args));
    } else {
      line(depth, ".");
    }
  }

  void line(int depth, const std::string& text) {
    out_ << std::string(static_cast<std::size_t>(depth) * 3, ' ') << text << '\n';
  }

 private:
  template <class Branch, class Header>
  void choice(const std::string& peer, const char* op, const std::vector<Branch>& branches,
              int depth, Header header) {
    if (branches.size() == 1) {
      const Branch& b = branches.front();
      std::string head = peer + " " + op + " " + header(b);
      if (b.body->is_stop()) {
        line(depth, head + ".");
      } else {
        line(depth, head);
        proc(*b.body, depth);
      }
      return;
    }
    line(depth, peer + " " + op + " {");
    for (const auto& b : branches) {
      if (b.body->is_stop()) {
        line(depth + 1, header(b) + ".");
      } else {
        line(depth + 1, header(b));
        proc(*b.body, depth + 2);
      }
    }
    line(depth, "}");
  }

  std::ostringstream out_;
};

}  // namespace

std::string pretty_print(const Proc& proc) {
  Printer p;
  p.proc(proc, 0);
  return p.take();
}

std::string pretty_print(const SystemDecl& system) {
  Printer p;
  p.line(0, "system " + system.name + (system.parent ? ": " + *system.parent : std::string()));
  for (const auto& u : system.usings) p.line(0, "using " + u);
  for (const auto& obj : system.objects) {
    p.line(0, "");
    p.line(0, "obj " + obj->name);
    for (const auto& b : obj->behaviours) {
      p.line(0, "behaviour " + b.name + binders_text(b.params));
      p.proc(*b.body, 1);
    }
    p.proc(*obj->main, 0);
  }
  return p.take();
}

}  // namespace objcheck
