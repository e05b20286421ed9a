#include "esst/concrete/system.hpp"

#include "esst/frontend/parser.hpp"

namespace esst::concrete {

System System::build(frontend::ThreadedProgram p) {
  System s;
  s.program = std::move(p);
  s.cfgs = frontend::build_cfgs(s.program);
  s.topo = sched::Topology::of(s.program);
  for (VarId g : s.program.global_vars()) s.vars.push_back(g);
  for (const auto& th : s.program.threads)
    for (VarId l : th.locals) s.vars.push_back(l);
  for (std::size_t i = 0; i < s.vars.size(); ++i) s.slot.emplace(s.vars[i], static_cast<int>(i));
  for (std::size_t t = 0; t < s.cfgs.size(); ++t) {
    auto bs = frontend::identify_atomic_blocks(s.cfgs[t], static_cast<int>(t));
    s.blocks.insert(s.blocks.end(), bs.begin(), bs.end());
  }
  s.summaries = frontend::compute_access_summary(s.program, s.cfgs, s.blocks);
  return s;
}

System System::from_source(std::string_view text) { return build(frontend::parse_program(text)); }

System System::from_file(const std::string& path) { return build(frontend::parse_file(path)); }

int System::slot_of(VarId v) const {
  auto it = slot.find(v);
  if (it == slot.end()) throw std::out_of_range("unknown variable " + logic::symbol_name(v));
  return it->second;
}

}  // namespace esst::concrete
