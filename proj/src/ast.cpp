#include "objcheck/ast.hpp"

#include <algorithm>

namespace objcheck {

const Behaviour* ObjectDecl::find_behaviour(std::string_view name) const {
  for (const auto& b : behaviours) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

namespace {

bool same_expr(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.text == b.text && a.number == b.number;
}

bool same_exprs(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), same_expr);
}

bool same_binders(const std::vector<Binder>& a, const std::vector<Binder>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const Binder& x, const Binder& y) { return x.name == y.name; });
}

}  // namespace

bool same_structure(const Proc& a, const Proc& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* s = a.send()) {
    const auto& t = *b.send();
    return s->peer == t.peer &&
           std::equal(s->branches.begin(), s->branches.end(), t.branches.begin(),
                      t.branches.end(), [](const SendBranch& x, const SendBranch& y) {
                        return x.label == y.label && same_exprs(x.args, y.args) &&
                               same_structure(*x.body, *y.body);
                      });
  }
  if (const auto* r = a.recv()) {
    const auto& t = *b.recv();
    return r->peer == t.peer &&
           std::equal(r->branches.begin(), r->branches.end(), t.branches.begin(),
                      t.branches.end(), [](const RecvBranch& x, const RecvBranch& y) {
                        return x.label == y.label && same_binders(x.binders, y.binders) &&
                               same_structure(*x.body, *y.body);
                      });
  }
  if (const auto* i = a.invoke()) {
    const auto& j = *b.invoke();
    return i->name == j.name && same_exprs(i->args, j.args);
  }
  return true;
}

bool same_structure(const ObjectDecl& a, const ObjectDecl& b) {
  if (a.name != b.name || a.behaviours.size() != b.behaviours.size()) return false;
  // behaviours form a map: compare by name, not position
  for (const auto& x : a.behaviours) {
    const Behaviour* y = b.find_behaviour(x.name);
    if (!y || !same_binders(x.params, y->params) || !same_structure(*x.body, *y->body)) {
      return false;
    }
  }
  return same_structure(*a.main, *b.main);
}

bool same_structure(const SystemDecl& a, const SystemDecl& b) {
  return a.name == b.name && a.parent == b.parent && a.usings == b.usings &&
         std::equal(a.objects.begin(), a.objects.end(), b.objects.begin(), b.objects.end(),
                    [](const auto& x, const auto& y) { return same_structure(*x, *y); });
}

}  // namespace objcheck
