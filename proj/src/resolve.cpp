#include "objcheck/resolve.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace objcheck {

namespace {

void collect_peers(const Proc& p, std::set<std::string>& out) {
  if (const auto* s = p.send()) {
    out.insert(s->peer);
    for (const auto& b : s->branches) collect_peers(*b.body, out);
  } else if (const auto* r = p.recv()) {
    out.insert(r->peer);
    for (const auto& b : r->branches) collect_peers(*b.body, out);
  }
}

class Resolver {
 public:
  explicit Resolver(std::span<const SystemDeclPtr> decls) {
    // Sorting makes duplicate detection independent of argument order.
    std::vector<SystemDeclPtr> sorted(decls.begin(), decls.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      return span_less(a->name_span, b->name_span);
    });
    for (const auto& d : sorted) {
      auto [it, fresh] = by_name_.emplace(d->name, d);
      if (!fresh) {
        auto diag = make_diagnostic(DiagKind::DuplicateSystem, d->name_span,
                                    fmt::format("system `{}` is declared twice", d->name));
        diag.notes.push_back(Note{it->second->name_span, "first declared here"});
        diags_.push_back(std::move(diag));
      }
    }
  }

  ResolveResult run(std::string_view root) {
    ResolveResult out;
    if (!diags_.empty()) {
      out.diagnostics = std::move(diags_);
      return out;
    }
    std::vector<std::string> chain;
    auto sys = system(root, Span{}, chain);
    if (diags_.empty()) {
      out.system = std::move(sys);
    } else {
      out.diagnostics = std::move(diags_);
    }
    return out;
  }

 private:
  Diagnostic& report(DiagKind kind, Span span, std::string message) {
    diags_.push_back(make_diagnostic(kind, span, std::move(message)));
    return diags_.back();
  }

  const SystemDecl* lookup(std::string_view name, Span at) {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) {
      report(DiagKind::UnknownSystem, at, fmt::format("unknown system `{}`", name));
      return nullptr;
    }
    return it->second.get();
  }

  // Depth-first walk over `using` edges; `stack` detects cycles.
  void imports(const SystemDecl& sys, std::vector<const SystemDecl*>& stack,
               std::vector<const SystemDecl*>& closure) {
    if (std::find(closure.begin(), closure.end(), &sys) != closure.end()) return;
    stack.push_back(&sys);
    closure.push_back(&sys);
    for (std::size_t i = 0; i < sys.usings.size(); ++i) {
      const SystemDecl* used = lookup(sys.usings[i], sys.using_spans[i]);
      if (!used) continue;
      if (std::find(stack.begin(), stack.end(), used) != stack.end()) {
        report(DiagKind::ImportCycle, sys.using_spans[i],
               fmt::format("importing `{}` from `{}` creates a cycle", used->name, sys.name));
        continue;
      }
      imports(*used, stack, closure);
    }
    stack.pop_back();
  }

  ResolvedSystemPtr system(std::string_view name, Span at, std::vector<std::string>& chain) {
    const SystemDecl* decl = lookup(name, at);
    if (!decl) return nullptr;
    if (std::find(chain.begin(), chain.end(), decl->name) != chain.end()) {
      report(DiagKind::InvalidParent, at,
             fmt::format("refinement chain through `{}` is cyclic", decl->name));
      return nullptr;
    }

    auto out = std::make_shared<ResolvedSystem>();
    out->name = decl->name;
    out->decl = by_name_.at(decl->name);

    std::vector<const SystemDecl*> stack;
    std::vector<const SystemDecl*> closure;
    imports(*decl, stack, closure);

    for (const SystemDecl* s : closure) {
      for (const auto& obj : s->objects) {
        auto [it, fresh] = out->objects.emplace(obj->name, obj);
        if (fresh) {
          out->owner.emplace(obj->name, s->name);
          continue;
        }
        if (it->second == obj) continue;
        const ObjectDecl* first = it->second.get();
        const ObjectDecl* second = obj.get();
        if (span_less(second->name_span, first->name_span)) std::swap(first, second);
        auto& d = report(DiagKind::DuplicateObject, second->name_span,
                         fmt::format("object `{}` is defined by both `{}` and `{}` in system `{}`",
                                     obj->name, out->owner.at(obj->name), s->name, decl->name));
        d.notes.push_back(Note{first->name_span, "also defined here"});
      }
    }

    for (const auto& [obj_name, obj] : out->objects) {
      for (const auto& peer : peers_of(*obj)) {
        if (!out->objects.contains(peer)) out->externals.insert(peer);
      }
    }

    if (decl->parent) {
      chain.push_back(decl->name);
      out->parent = system(*decl->parent, decl->parent_span, chain);
      chain.pop_back();
    }
    return out;
  }

  std::map<std::string, SystemDeclPtr> by_name_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::set<std::string> peers_of(const ObjectDecl& obj) {
  std::set<std::string> out;
  collect_peers(*obj.main, out);
  for (const auto& b : obj.behaviours) collect_peers(*b.body, out);
  return out;
}

ResolveResult resolve(std::span<const SystemDeclPtr> decls, std::string_view root) {
  return Resolver(decls).run(root);
}

}  // namespace objcheck
