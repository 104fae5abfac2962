#ifndef HFGTFLOW_CORE_MODEL_HPP
#define HFGTFLOW_CORE_MODEL_HPP

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace hfgtflow {

/// Designated pseudo-buffer for flows that cross the system boundary.
/// It never appears in the buffer list, so capabilities touching it get
/// single-signed incidence columns.
inline constexpr const char *kEnvironment = "environment";

struct Operand {
  std::string id;
  std::string name;
  bool has_state_net = false;
};

enum class ResourceKind { Transformation, IndependentBuffer, Transportation };

struct Resource {
  std::string id;
  std::string name;
  ResourceKind kind = ResourceKind::Transformation;

  bool is_buffer() const { return kind != ResourceKind::Transportation; }
};

enum class ProcessKind { Transformation, RefinedTransportation };

/// Per-firing operand quantity. Defaults to 1 (unweighted arc).
struct OperandQuantity {
  std::string operand;
  double quantity = 1.0;
};

struct Process {
  std::string id;
  std::string name;
  ProcessKind kind = ProcessKind::Transformation;
  std::vector<OperandQuantity> inputs;
  std::vector<OperandQuantity> outputs;
};

struct Capability {
  std::string id;
  std::string resource;
  std::string process;
  std::string origin_buffer;
  std::string destination_buffer;
  int duration_steps = 0;
};

/// Instantiated meta-architecture. Declaration order is canonical and fixes
/// every downstream index: operand -> 0..|L|-1, buffer -> 0..|B_S|-1,
/// capability -> 0..|E_S|-1.
class SystemModel {
public:
  SystemModel() = default;

  const std::vector<Operand> &operands() const { return operands_; }
  const std::vector<Resource> &resources() const { return resources_; }
  const std::vector<Process> &processes() const { return processes_; }
  const std::vector<Capability> &capabilities() const { return capabilities_; }

  /// The buffer subsequence of resources, declaration order.
  std::vector<Resource> buffers() const;

  std::size_t operand_count() const { return operands_.size(); }
  std::size_t buffer_count() const { return buffer_index_.size(); }
  std::size_t capability_count() const { return capabilities_.size(); }

  std::size_t operand_index(const std::string &id) const;
  std::size_t buffer_index(const std::string &id) const;
  std::size_t capability_index(const std::string &id) const;
  std::size_t resource_pos(const std::string &id) const;
  std::size_t process_pos(const std::string &id) const;

  bool is_environment(const std::string &id) const { return id == kEnvironment; }

  const Process &process_of(const Capability &c) const {
    return processes_[process_pos(c.process)];
  }
  const Resource &resource_of(const Capability &c) const {
    return resources_[resource_pos(c.resource)];
  }

  friend SystemModel build_system(std::vector<Operand> operands,
                                  std::vector<Resource> resources,
                                  std::vector<Process> processes,
                                  std::vector<Capability> capabilities);

private:
  std::vector<Operand> operands_;
  std::vector<Resource> resources_;
  std::vector<Process> processes_;
  std::vector<Capability> capabilities_;
  std::unordered_map<std::string, std::size_t> operand_index_;
  std::unordered_map<std::string, std::size_t> buffer_index_;
  std::unordered_map<std::string, std::size_t> capability_index_;
  std::unordered_map<std::string, std::size_t> resource_pos_;
  std::unordered_map<std::string, std::size_t> process_pos_;
};

/// Validates referential integrity and freezes the canonical index maps.
/// Throws Error with codes DanglingReference, DuplicateId, KindViolation.
SystemModel build_system(std::vector<Operand> operands,
                         std::vector<Resource> resources,
                         std::vector<Process> processes,
                         std::vector<Capability> capabilities);

} // namespace hfgtflow

#endif
