/**
 * This class represents a bag B of elements of type T.
 */
public class Bag<T> {

  /**
   * @desc A new empty bag is created.    
   * @ensures \forall e: T :: B(e) = 0
   */
   public Bag<T>()

  /**
   * @desc Adds an element.
   * @ensures B(elem) = \old(B(elem)) + 1
   * @ensures \forall e: T | e != elem :: B(e) = \old(B(e))  
   */
   public void add(T elem)

  /**
   * @desc Removes one instance of elem 
   * @requires B(elem) > 0
   * @ensures B(elem) = \old(B(elem)) - 1
   * @ensures \forall e: T | e != elem :: B(e) = \old(B(e))  
   */
   public void remove(T elem)

  /**
   * @desc Removes all instances of elem 
   * @ensures B(elem) = 0
   * @ensures \forall e: T | e != elem :: B(e) = \old(B(e))
   */
   public void removeAll(T elem)

  /**
   * @desc Counts the number of occurences of elem.
   * @pure
   * @ensures mult(elem) = B(elem)
   */
   public int mult(T elem)

  /**
   * @desc Counts the number of elems in the bag.
   * @pure
   * @ensures size() = \sum e: T :: B(e)
   */
   public int size()
}
