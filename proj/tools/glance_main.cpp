#include <iostream>
int main() { std::cout << "glance stub\n"; return 0; }
