#include "uadam/trace.hpp"

#include <stdexcept>
#include <string>

namespace uadam {

void RunTrace::append(const TraceRecord& record) {
  if (record.t != records_.size() + 1) {
    throw std::logic_error("trace step " + std::to_string(record.t) +
                           " out of order; expected " +
                           std::to_string(records_.size() + 1));
  }
  records_.push_back(record);
}

}  // namespace uadam
