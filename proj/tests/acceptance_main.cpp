#include <iostream>

int main() {
    std::cerr << "acceptance criteria binary not implemented yet\n";
    return 1;
}
