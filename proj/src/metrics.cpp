#include "bapa/formula.hpp"
#include "bapa/normalizer.hpp"

namespace bapa {

namespace {

std::size_t set_size(const SetTerm& s) {
  switch (s->kind) {
    case SetKind::Var:
    case SetKind::Empty:
    case SetKind::Univ: return 1;
    case SetKind::Compl: return 1 + set_size(s->lhs);
    default: return 1 + set_size(s->lhs) + set_size(s->rhs);
  }
}

std::size_t int_size(const IntTerm& t) {
  switch (t->kind) {
    case IntKind::Var:
    case IntKind::Const:
    case IntKind::MaxCard: return 1;
    case IntKind::Mul: return 2 + int_size(t->lhs);  // the factor counts as a constant node
    case IntKind::Card: return 1 + set_size(t->set);
    default: return 1 + int_size(t->lhs) + int_size(t->rhs);
  }
}

}  // namespace

std::size_t node_count(const Formula& f) {
  std::size_t n = 1;
  if (f->s1) n += set_size(f->s1);
  if (f->s2) n += set_size(f->s2);
  if (f->t1) n += int_size(f->t1);
  if (f->t2) n += int_size(f->t2);
  if (f->kind == FKind::Dvd) n += 1;
  for (const auto& k : f->kids) n += node_count(k);
  return n;
}

std::size_t count_alternations(const std::vector<Binder>& prefix) {
  std::size_t alts = 0;
  for (std::size_t i = 0; i + 1 < prefix.size(); ++i)
    if (prefix[i].quant != prefix[i + 1].quant) ++alts;
  return alts;
}

Metrics measure(const Formula& f) {
  check_sorts(f);
  Metrics m;
  m.size = node_count(f);
  auto pf = to_prenex(f);
  m.alternations = count_alternations(pf.prefix);
  for (const auto& b : pf.prefix) {
    switch (b.sort) {
      case Sort::Set: ++m.set_vars; break;
      case Sort::Int: ++m.int_vars; break;
      case Sort::Prop: ++m.prop_vars; break;
    }
  }
  return m;
}

}  // namespace bapa
