// Regenerates tests/data/mini_city.jsonl: make_mini_city > tests/data/mini_city.jsonl
#include <iostream>

#include "mini_city.hpp"

int main() {
  std::cout << geohalu::testing::mini_city_records();
  return 0;
}
