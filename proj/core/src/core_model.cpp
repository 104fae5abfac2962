#include "hfgtflow/core_model.hpp"

#include "hfgtflow/errors.hpp"

namespace hfgtflow {

namespace {

std::size_t lookup(const std::unordered_map<std::string, std::size_t> &map,
                   const std::string &id, const char *what) {
  auto it = map.find(id);
  if (it == map.end())
    throw Error(errc::dangling_reference,
                std::string(what) + " id '" + id + "' does not resolve");
  return it->second;
}

} // namespace

std::vector<Resource> SystemModel::buffers() const {
  std::vector<Resource> out;
  for (const auto &r : resources_)
    if (r.is_buffer())
      out.push_back(r);
  return out;
}

std::size_t SystemModel::operand_index(const std::string &id) const {
  return lookup(operand_index_, id, "operand");
}
std::size_t SystemModel::buffer_index(const std::string &id) const {
  return lookup(buffer_index_, id, "buffer");
}
std::size_t SystemModel::capability_index(const std::string &id) const {
  return lookup(capability_index_, id, "capability");
}
std::size_t SystemModel::resource_pos(const std::string &id) const {
  return lookup(resource_pos_, id, "resource");
}
std::size_t SystemModel::process_pos(const std::string &id) const {
  return lookup(process_pos_, id, "process");
}

SystemModel build_system(std::vector<Operand> operands,
                         std::vector<Resource> resources,
                         std::vector<Process> processes,
                         std::vector<Capability> capabilities) {
  SystemModel m;
  m.operands_ = std::move(operands);
  m.resources_ = std::move(resources);
  m.processes_ = std::move(processes);
  m.capabilities_ = std::move(capabilities);

  auto insert_unique = [](std::unordered_map<std::string, std::size_t> &map,
                          const std::string &id, std::size_t idx,
                          const char *what) {
    if (id == kEnvironment)
      throw Error(errc::kind_violation,
                  std::string(what) + " may not use the reserved id '" +
                      kEnvironment + "'");
    if (!map.emplace(id, idx).second)
      throw Error(errc::duplicate_id,
                  std::string(what) + " id '" + id + "' declared twice");
  };

  for (std::size_t i = 0; i < m.operands_.size(); ++i)
    insert_unique(m.operand_index_, m.operands_[i].id, i, "operand");
  for (std::size_t i = 0; i < m.resources_.size(); ++i) {
    insert_unique(m.resource_pos_, m.resources_[i].id, i, "resource");
    if (m.resources_[i].is_buffer())
      m.buffer_index_.emplace(m.resources_[i].id, m.buffer_index_.size());
  }
  for (std::size_t i = 0; i < m.processes_.size(); ++i) {
    const Process &p = m.processes_[i];
    insert_unique(m.process_pos_, p.id, i, "process");
    if (p.inputs.empty() && p.outputs.empty())
      throw Error(errc::kind_violation,
                  "process '" + p.id + "' has neither inputs nor outputs");
    for (const auto &oq : p.inputs)
      lookup(m.operand_index_, oq.operand, "operand");
    for (const auto &oq : p.outputs)
      lookup(m.operand_index_, oq.operand, "operand");
  }
  for (std::size_t i = 0; i < m.capabilities_.size(); ++i) {
    const Capability &c = m.capabilities_[i];
    insert_unique(m.capability_index_, c.id, i, "capability");
    std::size_t rpos = lookup(m.resource_pos_, c.resource, "resource");
    lookup(m.process_pos_, c.process, "process");
    if (c.duration_steps < 0)
      throw Error(errc::kind_violation,
                  "capability '" + c.id + "' has negative duration");

    auto check_endpoint = [&](const std::string &b, const char *side) {
      if (b == kEnvironment)
        return;
      std::size_t pos = lookup(m.resource_pos_, b, side);
      if (!m.resources_[pos].is_buffer())
        throw Error(errc::kind_violation,
                    "capability '" + c.id + "' allocates " + side +
                        " to non-buffer resource '" + b + "'");
    };
    check_endpoint(c.origin_buffer, "origin_buffer");
    check_endpoint(c.destination_buffer, "destination_buffer");

    const Resource &r = m.resources_[rpos];
    if (r.kind != ResourceKind::Transportation) {
      // A transformation/storage capability self-loops on its own resource;
      // boundary-crossing processes may use the environment pseudo-buffer
      // on one side.
      auto ok = [&](const std::string &b) {
        return b == c.resource || b == kEnvironment;
      };
      if (!ok(c.origin_buffer) || !ok(c.destination_buffer))
        throw Error(errc::kind_violation,
                    "capability '" + c.id +
                        "' on a non-transportation resource must self-loop "
                        "(or touch the environment)");
    }
  }

  return m;
}

} // namespace hfgtflow
