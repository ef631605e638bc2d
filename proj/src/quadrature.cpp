#include "plpcov/quadrature.hpp"

namespace plpcov::quad {

std::uint64_t& evaluation_counter() {
  thread_local std::uint64_t count = 0;
  return count;
}

}  // namespace plpcov::quad
